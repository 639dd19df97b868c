#pragma once

#include <stdexcept>
#include <string>

namespace trajcomp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validation failures in the trajectory/query domain (CLI exit code 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyTrajectoryError : public DomainError {
 public:
  using DomainError::DomainError;
};

class MalformedInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A compressed trajectory does not correspond to its raw trajectory.
class MismatchError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigurationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// File could not be opened or written (CLI exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
};

/// File content could not be parsed: bad syntax, version or checksum (CLI exit code 2).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace trajcomp
