#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trajcomp/geometry.hpp"

namespace trajcomp {

struct TrajectoryPoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;  ///< seconds, strictly increasing within a trajectory

  Point2 position() const { return {x, y}; }
  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RawTrajectory {
  std::string id;
  std::vector<TrajectoryPoint> points;

  friend bool operator==(const RawTrajectory&, const RawTrajectory&) = default;
};

/// Retained points plus, for every segment between consecutive retained
/// points, the number of raw points discarded strictly between them.
struct CompressedTrajectory {
  std::string id;
  std::vector<TrajectoryPoint> retained;
  std::vector<std::uint64_t> discarded_counts;
  double epsilon = 0.0;

  std::size_t segment_count() const { return retained.size() < 2 ? 0 : retained.size() - 1; }
  Segment2 segment(std::size_t k) const {
    return {retained[k].position(), retained[k + 1].position()};
  }
  /// Number of raw points this trajectory was compressed from.
  std::uint64_t original_point_count() const;

  friend bool operator==(const CompressedTrajectory&, const CompressedTrajectory&) = default;
};

/// Segments exposed to the index and the query engine. A single-point
/// trajectory is exposed as one zero-length segment with nothing discarded.
std::size_t indexed_segment_count(const CompressedTrajectory& traj);
Segment2 indexed_segment(const CompressedTrajectory& traj, std::size_t k);
std::uint64_t indexed_discarded_count(const CompressedTrajectory& traj, std::size_t k);

struct DatasetHeader {
  static constexpr int kFormatVersion = 1;

  double epsilon = 0.0;
  double sigma = 0.0;
  std::uint64_t trajectory_count = 0;
  std::uint64_t raw_point_count = 0;
  std::uint64_t retained_point_count = 0;
  int format_version = kFormatVersion;

  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

struct CompressedDataset {
  DatasetHeader header;
  std::vector<CompressedTrajectory> trajectories;

  friend bool operator==(const CompressedDataset&, const CompressedDataset&) = default;
};

/// Throws EmptyTrajectoryError / MalformedInputError for invalid input.
void validate_raw(const RawTrajectory& raw);

/// Smallest rectangle holding every point; `valid()` is false when there are none.
Rect dataset_bounds(const std::vector<RawTrajectory>& raw);
Rect dataset_bounds(const std::vector<CompressedTrajectory>& compressed);

}  // namespace trajcomp
