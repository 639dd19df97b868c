#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trajcomp/geometry.hpp"
#include "trajcomp/trajectory.hpp"

namespace trajcomp {

/// Consecutive segments [first_segment, last_segment] of one trajectory,
/// referenced by position in the indexed dataset.
struct SegmentRun {
  std::uint32_t trajectory = 0;
  std::uint32_t first_segment = 0;
  std::uint32_t last_segment = 0;

  friend auto operator<=>(const SegmentRun&, const SegmentRun&) = default;
};

struct SegmentRef {
  std::uint32_t trajectory = 0;
  std::uint32_t segment = 0;

  friend auto operator<=>(const SegmentRef&, const SegmentRef&) = default;
};

struct IndexConfig {
  std::size_t xi = 32;   ///< a node splits when more than xi endpoints fall in it
  double epsilon = 0.0;  ///< stadium radius used for payload assignment

  void validate() const;
};

/// The two candidate partitions of a node: Way A cuts at the median x first and
/// then at the median y of each half; Way B cuts y first.
enum class SplitWay : std::uint8_t { kVerticalFirst = 0, kHorizontalFirst = 1 };

/// Four child regions that tile the parent. Points on a cut line belong to the
/// lower/left side; children are stored as closed rectangles.
struct Split {
  SplitWay way = SplitWay::kVerticalFirst;
  double first_cut = 0.0;
  std::array<double, 2> second_cuts{};
  std::array<Rect, 4> quadrants{};
  std::size_t duplicated_segments = 0;  ///< sum over quadrants of overlapping stadiums

  /// Index of the quadrant a point of the parent region belongs to.
  std::size_t quadrant_of(const Point2& p) const;
};

/// Lower median (index floor((k-1)/2) of the sorted values); the midpoint of
/// [lo, hi] when `values` is empty.
double lower_median(std::vector<double> values, double lo, double hi);

/// Builds both partitions of `region` and returns the one whose quadrants
/// overlap fewer segment stadiums (Way A on ties).
Split split_node(const Rect& region, const std::vector<Point2>& endpoints,
                 const std::vector<Segment2>& segments, double epsilon);

struct AspNode {
  Rect region;
  std::array<std::int32_t, 4> children{-1, -1, -1, -1};
  std::vector<SegmentRun> runs;  ///< leaf payload
  std::uint32_t endpoint_count = 0;
  std::uint32_t height = 1;  ///< root is 1

  bool is_leaf() const { return children[0] < 0; }
};

struct TreeStats {
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::uint32_t min_leaf_height = 0;
  std::uint32_t max_leaf_height = 0;
  double avg_leaf_height = 0.0;
  std::size_t total_endpoints = 0;
  std::size_t max_leaf_endpoints = 0;
  std::size_t total_runs = 0;
};

/// Adaptive quadtree over compressed-segment endpoints. Immutable after
/// build; nodes live in a flat vector with the root at index 0.
class AspTree {
 public:
  static constexpr std::uint32_t kMaxHeight = 64;

  AspTree() = default;

  /// Root region is the bounding box of all stadiums. An empty dataset gives a
  /// single empty leaf.
  static AspTree build(const std::vector<CompressedTrajectory>& trajectories,
                       const IndexConfig& cfg);

  const IndexConfig& config() const { return config_; }
  const std::vector<AspNode>& nodes() const { return nodes_; }
  const AspNode& root() const { return nodes_.front(); }
  std::size_t trajectory_count() const { return trajectory_count_; }

  /// Leaves whose region overlaps `r`, breadth-first.
  std::vector<std::size_t> leaves_overlapping(const Rect& r) const;

  /// Runs stored in overlapping leaves, merged per trajectory into disjoint
  /// maximal runs and sorted.
  std::vector<SegmentRun> query_leaves(const Rect& r) const;

  TreeStats stats() const;

  /// Versioned JSON dump; load throws FormatError on corrupt input.
  void save(std::ostream& out) const;
  static AspTree load(std::istream& in);

 private:
  IndexConfig config_;
  std::vector<AspNode> nodes_;
  std::size_t trajectory_count_ = 0;
};

/// Sorts and merges overlapping or adjacent runs of the same trajectory.
std::vector<SegmentRun> merge_runs(std::vector<SegmentRun> runs);

/// Groups sorted segment references into maximal consecutive runs.
std::vector<SegmentRun> runs_from_segments(const std::vector<SegmentRef>& refs);

}  // namespace trajcomp
