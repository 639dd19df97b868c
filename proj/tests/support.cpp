#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trajcomp::testing {

RawTrajectory make_raw(std::string id, std::initializer_list<std::pair<double, double>> xy) {
  RawTrajectory raw{std::move(id), {}};
  double t = 0.0;
  for (const auto& [x, y] : xy) raw.points.push_back({x, y, t++});
  return raw;
}

RawTrajectory make_raw(std::string id, const std::vector<Point2>& xy) {
  RawTrajectory raw{std::move(id), {}};
  double t = 0.0;
  for (const auto& p : xy) raw.points.push_back({p.x, p.y, t++});
  return raw;
}

double sampled_segment_distance(const Point2& m, const Segment2& seg) {
  constexpr int kSamples = 20000;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double f = static_cast<double>(i) / kSamples;
    const double x = seg.start.x + f * (seg.end.x - seg.start.x);
    const double y = seg.start.y + f * (seg.end.y - seg.start.y);
    best = std::min(best, std::hypot(m.x - x, m.y - y));
  }
  return best;
}

bool quadratic_segment_meets_disc(const Segment2& seg, const Point2& c, double r) {
  const double dx = seg.end.x - seg.start.x;
  const double dy = seg.end.y - seg.start.y;
  const double fx = seg.start.x - c.x;
  const double fy = seg.start.y - c.y;
  const double a = dx * dx + dy * dy;
  const double b = 2.0 * (fx * dx + fy * dy);
  const double k = fx * fx + fy * fy - r * r;
  if (k <= 0.0) return true;  // start inside
  if (a == 0.0) return false;
  const double disc = b * b - 4.0 * a * k;
  if (disc < 0.0) return false;
  const double sq = std::sqrt(disc);
  const double t1 = (-b - sq) / (2.0 * a);
  const double t2 = (-b + sq) / (2.0 * a);
  return (t1 >= 0.0 && t1 <= 1.0) || (t2 >= 0.0 && t2 <= 1.0) || (t1 < 0.0 && t2 > 1.0);
}

double clamped_projection_distance(const Point2& m, const Segment2& seg) {
  const double dx = seg.end.x - seg.start.x;
  const double dy = seg.end.y - seg.start.y;
  const double len2 = dx * dx + dy * dy;
  const double t =
      len2 == 0.0 ? 0.0 : std::clamp(((m.x - seg.start.x) * dx + (m.y - seg.start.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(m.x - (seg.start.x + t * dx), m.y - (seg.start.y + t * dy));
}

double clamped_rect_distance(const Point2& p, double min_x, double min_y, double max_x, double max_y) {
  const double cx = std::clamp(p.x, min_x, max_x);
  const double cy = std::clamp(p.y, min_y, max_y);
  return std::hypot(p.x - cx, p.y - cy);
}

double sampled_segment_rect_distance(const Segment2& seg, double min_x, double min_y, double max_x,
                                     double max_y) {
  constexpr int kSamples = 20000;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double f = static_cast<double>(i) / kSamples;
    const Point2 p{seg.start.x + f * (seg.end.x - seg.start.x),
                   seg.start.y + f * (seg.end.y - seg.start.y)};
    best = std::min(best, clamped_rect_distance(p, min_x, min_y, max_x, max_y));
  }
  return best;
}

RawTrajectory random_walk(Rng& rng, std::size_t points, double step, double turn_sd, std::string id) {
  std::normal_distribution<double> turn(0.0, turn_sd);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RawTrajectory raw{std::move(id), {}};
  double x = 0.0, y = 0.0, heading = 2.0 * std::numbers::pi * unit(rng);
  for (std::size_t i = 0; i < points; ++i) {
    raw.points.push_back({x, y, static_cast<double>(i)});
    heading += turn(rng);
    if (unit(rng) < 0.05) heading += std::numbers::pi * (unit(rng) - 0.5) * 2.0;
    const double len = step * (0.5 + unit(rng));
    x += len * std::cos(heading);
    y += len * std::sin(heading);
  }
  return raw;
}

std::vector<RawTrajectory> mixed_dataset(std::size_t count, std::size_t min_points,
                                         std::size_t max_points, std::uint64_t seed, double extent) {
  GeneratorSpec spec;
  spec.trajectory_count = count;
  spec.min_points = min_points;
  spec.max_points = max_points;
  spec.extent = extent;
  return generate_synthetic(spec, seed);
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("trajcomp_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace trajcomp::testing

namespace trajcomp::testing {

SoundnessTally check_candidate_soundness(std::uint64_t seed, std::size_t trials) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> spread(0.0, 0.25);
  SoundnessTally tally;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Point2 anchor{20.0 * unit(rng) - 10.0, 20.0 * unit(rng) - 10.0};
    const double eps = 0.05 + 2.0 * unit(rng);
    // A quarter of the trials aim straight at the seam.
    const double heading = unit(rng) < 0.25 ? std::numbers::pi + 0.1 * (unit(rng) - 0.5)
                                            : 2.0 * std::numbers::pi * unit(rng);
    CandidateRegion region(anchor);
    std::vector<Point2> updates;
    const int k = 1 + static_cast<int>(unit(rng) * 6);
    double reach = eps;
    for (int j = 0; j < k; ++j) {
      reach += 0.2 + 4.0 * unit(rng);
      const double a = heading + spread(rng);
      const Point2 p{anchor.x + reach * std::cos(a), anchor.y + reach * std::sin(a)};
      if (distance(anchor, p) <= eps) continue;
      region.update(p, eps);
      updates.push_back(p);
      if (region.empty()) break;
    }
    const double pr = unit(rng) < 0.5 ? reach * (0.8 + unit(rng)) : 40.0 * unit(rng);
    const double pa = unit(rng) < 0.7 ? heading + spread(rng) : 2.0 * std::numbers::pi * unit(rng);
    const Point2 probe{anchor.x + pr * std::cos(pa), anchor.y + pr * std::sin(pa)};
    ++tally.trials;
    if (!region.contains(probe) || probe == anchor) continue;
    ++tally.accepted;
    for (const auto& u : updates) {
      const double d = clamped_projection_distance(u, {anchor, probe});
      if (d > eps + 1e-9) {
        ++tally.violations;
        tally.worst_excess = std::max(tally.worst_excess, d - eps);
      }
    }
  }
  return tally;
}

}  // namespace trajcomp::testing
