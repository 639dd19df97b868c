#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "trajcomp/trajectory.hpp"

namespace trajcomp {

/// Raw CSV: rows `id,x,y,t`, grouped by id in first-appearance order. A header
/// row is optional. Throws FormatError (with line number) on syntax errors and
/// MalformedInputError when a trajectory's timestamps are not strictly increasing.
std::vector<RawTrajectory> parse_raw_csv(std::istream& in);
std::vector<RawTrajectory> read_raw_csv(const std::filesystem::path& path);

void format_raw_csv(std::ostream& out, const std::vector<RawTrajectory>& raw);
void write_raw_csv(const std::filesystem::path& path, const std::vector<RawTrajectory>& raw);

/// Compressed dataset as JSON lines: one header line, then one line per
/// trajectory. See docs/formats.md.
void format_compressed(std::ostream& out, const CompressedDataset& dataset);
CompressedDataset parse_compressed(std::istream& in);
void write_compressed(const std::filesystem::path& path, const CompressedDataset& dataset);
CompressedDataset read_compressed(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

/// `%.17g`: 17 significant digits, enough to read back the identical double.
std::string format_double(double v);

/// Maps (lon, lat) degrees to planar metres around `reference_lat_deg`.
void project_equirectangular(std::vector<RawTrajectory>& raw, double reference_lat_deg);

}  // namespace trajcomp
