#include "trajcomp/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "trajcomp/errors.hpp"

namespace trajcomp {

namespace {

constexpr const char* kCompressedFormat = "trajcomp-compressed";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string trajectory_line(const CompressedTrajectory& t) {
  std::string line = "{\"id\":" + nlohmann::json(t.id).dump() + ",\"points\":[";
  for (std::size_t i = 0; i < t.retained.size(); ++i) {
    const auto& p = t.retained[i];
    if (i) line += ',';
    line += fmt::format("[{},{},{}]", format_double(p.x), format_double(p.y), format_double(p.t));
  }
  line += "],\"discarded\":[";
  for (std::size_t i = 0; i < t.discarded_counts.size(); ++i) {
    if (i) line += ',';
    line += std::to_string(t.discarded_counts[i]);
  }
  line += "]}";
  return line;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

std::vector<RawTrajectory> parse_raw_csv(std::istream& in) {
  std::vector<RawTrajectory> out;
  std::unordered_map<std::string, std::size_t> slot;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_csv(view);
    if (fields.size() != 4)
      throw FormatError("line " + std::to_string(line_no) + ": expected 4 fields id,x,y,t, got " +
                        std::to_string(fields.size()));
    TrajectoryPoint p;
    const bool numeric =
        parse_number(fields[1], p.x) && parse_number(fields[2], p.y) && parse_number(fields[3], p.t);
    if (!numeric) {
      if (line_no == 1) continue;  // header row
      throw FormatError("line " + std::to_string(line_no) + ": invalid number");
    }
    if (fields[0].empty()) throw FormatError("line " + std::to_string(line_no) + ": empty id");
    const std::string id(fields[0]);
    auto [it, inserted] = slot.try_emplace(id, out.size());
    if (inserted) out.push_back({id, {}});
    out[it->second].points.push_back(p);
  }
  if (in.bad()) throw IoError("read error");
  for (const auto& t : out) validate_raw(t);
  return out;
}

std::vector<RawTrajectory> read_raw_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_raw_csv(in);
}

void format_raw_csv(std::ostream& out, const std::vector<RawTrajectory>& raw) {
  out << "id,x,y,t\n";
  for (const auto& t : raw) {
    // Ids are written unquoted, so they must not contain field or row separators.
    if (t.id.empty() || t.id.find_first_of(",\"\r\n") != std::string::npos)
      throw MalformedInputError("trajectory id '" + t.id + "' cannot be written as a CSV field");
    for (const auto& p : t.points)
      out << t.id << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
          << format_double(p.t) << '\n';
  }
}

void write_raw_csv(const std::filesystem::path& path, const std::vector<RawTrajectory>& raw) {
  auto out = open_output(path);
  format_raw_csv(out, raw);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void format_compressed(std::ostream& out, const CompressedDataset& dataset) {
  std::string body;
  for (const auto& t : dataset.trajectories) {
    body += trajectory_line(t);
    body += '\n';
  }
  const auto& h = dataset.header;
  out << fmt::format(
      "{{\"format\":\"{}\",\"version\":{},\"epsilon\":{},\"sigma\":{},\"trajectory_count\":{},"
      "\"raw_point_count\":{},\"retained_point_count\":{},\"checksum\":\"{:016x}\"}}\n",
      kCompressedFormat, h.format_version, format_double(h.epsilon), format_double(h.sigma),
      dataset.trajectories.size(), h.raw_point_count, h.retained_point_count, fnv1a64(body));
  out << body;
}

CompressedDataset parse_compressed(std::istream& in) {
  CompressedDataset ds;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("compressed dataset: missing header line");
  std::string expected_checksum;
  try {
    const auto h = nlohmann::json::parse(line);
    if (h.at("format").get<std::string>() != kCompressedFormat)
      throw FormatError("compressed dataset: unknown format");
    ds.header.format_version = h.at("version").get<int>();
    if (ds.header.format_version != DatasetHeader::kFormatVersion)
      throw FormatError("compressed dataset: unsupported version " +
                        std::to_string(ds.header.format_version));
    ds.header.epsilon = h.at("epsilon").get<double>();
    ds.header.sigma = h.at("sigma").get<double>();
    ds.header.trajectory_count = h.at("trajectory_count").get<std::uint64_t>();
    ds.header.raw_point_count = h.at("raw_point_count").get<std::uint64_t>();
    ds.header.retained_point_count = h.at("retained_point_count").get<std::uint64_t>();
    expected_checksum = h.at("checksum").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("compressed dataset: bad header: ") + e.what());
  }
  if (!(ds.header.epsilon > 0.0) || !(ds.header.sigma >= 0.0))
    throw FormatError("compressed dataset: header requires epsilon > 0 and sigma >= 0");

  std::uint64_t checksum = fnv1a64("");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    checksum = fnv1a64(line, checksum);
    checksum = fnv1a64("\n", checksum);
    CompressedTrajectory t;
    try {
      const auto j = nlohmann::json::parse(line);
      t.id = j.at("id").get<std::string>();
      for (const auto& p : j.at("points")) {
        const auto v = p.get<std::array<double, 3>>();
        t.retained.push_back({v[0], v[1], v[2]});
      }
      t.discarded_counts = j.at("discarded").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("compressed dataset line " + std::to_string(line_no) + ": " + e.what());
    }
    if (t.retained.empty() || t.discarded_counts.size() + 1 != t.retained.size())
      throw FormatError("compressed dataset line " + std::to_string(line_no) +
                        ": inconsistent point and segment counts");
    t.epsilon = ds.header.epsilon;
    ds.trajectories.push_back(std::move(t));
  }
  if (ds.trajectories.size() != ds.header.trajectory_count)
    throw FormatError("compressed dataset: expected " + std::to_string(ds.header.trajectory_count) +
                      " trajectories, found " + std::to_string(ds.trajectories.size()) +
                      " (truncated file?)");
  if (fmt::format("{:016x}", checksum) != expected_checksum)
    throw FormatError("compressed dataset: checksum mismatch");
  return ds;
}

void write_compressed(const std::filesystem::path& path, const CompressedDataset& dataset) {
  auto out = open_output(path);
  format_compressed(out, dataset);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CompressedDataset read_compressed(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_compressed(in);
}

void project_equirectangular(std::vector<RawTrajectory>& raw, double reference_lat_deg) {
  constexpr double kEarthRadius = 6371008.8;
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double scale_x = kEarthRadius * kDeg * std::cos(reference_lat_deg * kDeg);
  for (auto& t : raw) {
    for (auto& p : t.points) {
      p.x *= scale_x;
      p.y *= kEarthRadius * kDeg;
    }
  }
}

}  // namespace trajcomp
