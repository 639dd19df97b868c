#include "trajcomp/uncertainty.hpp"

#include <cmath>

#include "trajcomp/errors.hpp"

namespace trajcomp {

namespace {

// Level curve of a zero-length segment is the circle of radius rd.
Point2 sample_level_curve(const Segment2& seg, double rd, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double len = seg.length();
  if (len == 0.0) {
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    return {seg.start.x + rd * std::cos(phi), seg.start.y + rd * std::sin(phi)};
  }
  const Vec2 dir{(seg.end.x - seg.start.x) / len, (seg.end.y - seg.start.y) / len};
  const Vec2 normal{-dir.y, dir.x};
  const double perimeter = 2.0 * len + 2.0 * std::numbers::pi * rd;
  const double u = perimeter * unit(rng);
  if (u < len) {
    return {seg.start.x + dir.x * u + normal.x * rd, seg.start.y + dir.y * u + normal.y * rd};
  }
  if (u < 2.0 * len) {
    const double s = u - len;
    return {seg.start.x + dir.x * s - normal.x * rd, seg.start.y + dir.y * s - normal.y * rd};
  }
  // Both caps together form one full circle of directions; the forward half
  // is centred on the end point, the backward half on the start point.
  const double phi = (u - 2.0 * len) / rd;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const Vec2 v{c * dir.x + s * normal.x, c * dir.y + s * normal.y};
  const Point2& center = c >= 0.0 ? seg.end : seg.start;
  return {center.x + rd * v.x, center.y + rd * v.y};
}

}  // namespace

bool ebr_intersects_rect(const EpsilonBoundingRegion& ebr, const Rect& r) {
  if (!rects_overlap(ebr.bounds(), r)) return false;
  return segment_rect_distance(ebr.segment, r) <= ebr.epsilon;
}

void SamplerConfig::validate() const {
  if (n_samples < 1) throw ConfigurationError("n_samples must be at least 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw ConfigurationError("sigma must be non-negative and finite");
}

double draw_offset(double sigma, double epsilon, Rng& rng, std::uint64_t* draws) {
  if (sigma == 0.0) {
    if (draws) ++*draws;
    return 0.0;
  }
  std::normal_distribution<double> gauss(0.0, sigma);
  double rd = 0.0;
  do {
    rd = std::abs(gauss(rng));
    if (draws) ++*draws;
  } while (rd > epsilon);
  return rd;
}

Point2 sample_offset_point(const Segment2& seg, double rd, Rng& rng) {
  if (seg.degenerate())
    throw DegenerateGeometryError("cannot sample the offset curve of a zero-length segment");
  return sample_level_curve(seg, rd, rng);
}

double estimate_segment_probability(const Segment2& seg, const Rect& r, double epsilon,
                                    std::uint64_t n_discarded, const SamplerConfig& cfg) {
  cfg.validate();
  if (n_discarded == 0) return 0.0;
  Rng rng(cfg.seed);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < cfg.n_samples; ++k) {
    const double rd = draw_offset(cfg.sigma, epsilon, rng);
    if (rect_contains(r, sample_level_curve(seg, rd, rng))) ++inside;
  }
  return probability_from_rate(static_cast<double>(inside) / static_cast<double>(cfg.n_samples),
                               n_discarded);
}

double probability_from_rate(double rate, std::uint64_t n_discarded) {
  return 1.0 - std::pow(1.0 - rate, static_cast<double>(n_discarded));
}

double compose_trajectory_probability(std::span<const double> segment_probs) {
  double miss = 1.0;
  for (double p : segment_probs) miss *= 1.0 - p;
  return 1.0 - miss;
}

}  // namespace trajcomp
