#pragma once

#include <iosfwd>

namespace trajcomp::cli {

/// Exit codes: 0 success, 1 domain/validation error, 2 I/O or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs `trajcomp <generate|compress|index|query|eval> [options]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trajcomp::cli
