#include "trajcomp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trajcomp/errors.hpp"

namespace trajcomp {

std::uint64_t CompressedTrajectory::original_point_count() const {
  return std::accumulate(discarded_counts.begin(), discarded_counts.end(),
                         static_cast<std::uint64_t>(retained.size()));
}

std::size_t indexed_segment_count(const CompressedTrajectory& traj) {
  if (traj.retained.empty()) return 0;
  return traj.retained.size() == 1 ? 1 : traj.retained.size() - 1;
}

Segment2 indexed_segment(const CompressedTrajectory& traj, std::size_t k) {
  if (traj.retained.size() == 1) return {traj.retained[0].position(), traj.retained[0].position()};
  return traj.segment(k);
}

std::uint64_t indexed_discarded_count(const CompressedTrajectory& traj, std::size_t k) {
  return traj.retained.size() == 1 ? 0 : traj.discarded_counts[k];
}

void validate_raw(const RawTrajectory& raw) {
  if (raw.points.empty())
    throw EmptyTrajectoryError("trajectory '" + raw.id + "' has no points");
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    const auto& p = raw.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.t))
      throw MalformedInputError("trajectory '" + raw.id + "' has a non-finite value at index " +
                                std::to_string(i));
    if (i > 0 && !(raw.points[i - 1].t < p.t))
      throw MalformedInputError("trajectory '" + raw.id +
                                "' timestamps are not strictly increasing at index " +
                                std::to_string(i));
  }
}

namespace {
template <class Points>
void extend(Rect& r, const Points& points) {
  for (const auto& p : points) {
    r.min_x = std::min(r.min_x, p.x);
    r.min_y = std::min(r.min_y, p.y);
    r.max_x = std::max(r.max_x, p.x);
    r.max_y = std::max(r.max_y, p.y);
  }
}

Rect empty_rect() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, -inf, -inf};
}
}  // namespace

Rect dataset_bounds(const std::vector<RawTrajectory>& raw) {
  Rect r = empty_rect();
  for (const auto& t : raw) extend(r, t.points);
  return r;
}

Rect dataset_bounds(const std::vector<CompressedTrajectory>& compressed) {
  Rect r = empty_rect();
  for (const auto& t : compressed) extend(r, t.retained);
  return r;
}

}  // namespace trajcomp
