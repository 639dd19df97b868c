#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance runner. Oracles here deliberately avoid the library's own
// geometry so they can catch its mistakes.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "trajcomp/compressor.hpp"
#include "trajcomp/geometry.hpp"
#include "trajcomp/rng.hpp"
#include "trajcomp/synthetic.hpp"
#include "trajcomp/trajectory.hpp"

namespace trajcomp::testing {

/// Trajectory with timestamps 0, 1, 2, ...
RawTrajectory make_raw(std::string id, std::initializer_list<std::pair<double, double>> xy);
RawTrajectory make_raw(std::string id, const std::vector<Point2>& xy);

/// Minimum distance from `m` to 20001 points spread evenly along `seg`.
double sampled_segment_distance(const Point2& m, const Segment2& seg);

/// Distance to the closest point of `seg`, found by clamping the projection
/// parameter to [0, 1].
double clamped_projection_distance(const Point2& m, const Segment2& seg);

/// Closed disc / segment test by solving |s + t(e - s) - c|^2 = r^2 for t.
bool quadratic_segment_meets_disc(const Segment2& seg, const Point2& c, double r);

/// Distance from a point to a closed rectangle by clamping.
double clamped_rect_distance(const Point2& p, double min_x, double min_y, double max_x, double max_y);

/// Stadium/rectangle overlap by dense sampling: exact when the segment is
/// within `epsilon - slack` or farther than `epsilon + slack` from the rect.
double sampled_segment_rect_distance(const Segment2& seg, double min_x, double min_y, double max_x,
                                     double max_y);

/// Random walk with occasional sharp turns; useful for quick fixtures.
RawTrajectory random_walk(Rng& rng, std::size_t points, double step, double turn_sd,
                          std::string id = "w");

/// Mixed-motif synthetic dataset with points-per-trajectory in [min_points, max_points].
std::vector<RawTrajectory> mixed_dataset(std::size_t count, std::size_t min_points,
                                         std::size_t max_points, std::uint64_t seed,
                                         double extent = 10000.0);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace trajcomp::testing

namespace trajcomp::testing {

struct SoundnessTally {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;    ///< probes the candidate region contained
  std::uint64_t violations = 0;  ///< accepted probes leaving an update point farther than epsilon
  double worst_excess = 0.0;
};

/// Random (anchor, update set, probe) triples, including wedges straddling the
/// +-pi seam; each accepted probe is checked with a direct PSED computation.
SoundnessTally check_candidate_soundness(std::uint64_t seed, std::size_t trials);

}  // namespace trajcomp::testing
