#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "trajcomp/geometry.hpp"
#include "trajcomp/rng.hpp"

namespace trajcomp {

/// Stadium of all points within PSED epsilon of a compressed segment. Every
/// point discarded for this segment lies inside it.
struct EpsilonBoundingRegion {
  Segment2 segment;
  double epsilon = 0.0;

  bool contains(const Point2& p) const { return psed(p, segment) <= epsilon; }
  /// Exact bounding rectangle of the stadium.
  Rect bounds() const { return bounding_rect(segment).expanded(epsilon); }
};

/// Exact stadium/rectangle overlap: the segment comes within epsilon of `r`.
bool ebr_intersects_rect(const EpsilonBoundingRegion& ebr, const Rect& r);

struct SamplerConfig {
  double sigma = 0.0;          ///< deviation of the zero-mean Gaussian over PSEDs
  std::size_t n_samples = 15;  ///< sample points per segment
  std::uint64_t seed = 0;

  void validate() const;
};

/// |N(0, sigma)| redrawn until it is <= epsilon. sigma == 0 yields 0.
/// `draws`, when given, is incremented once per Gaussian draw.
double draw_offset(double sigma, double epsilon, Rng& rng, std::uint64_t* draws = nullptr);

/// Uniform (by arc length) point on the level curve {p : psed(p, seg) == rd}:
/// two parallel stretches plus two semicircular caps. Throws
/// DegenerateGeometryError for a zero-length segment.
Point2 sample_offset_point(const Segment2& seg, double rd, Rng& rng);

/// Monte-Carlo estimate that at least one of `n_discarded` points hidden in
/// the segment's stadium lies in `r`: 1 - (1 - rate)^n_discarded, where rate
/// is the fraction of n_samples sampled points inside `r`. The generator is
/// seeded from cfg.seed, so equal inputs give equal draws for any `r`.
double estimate_segment_probability(const Segment2& seg, const Rect& r, double epsilon,
                                    std::uint64_t n_discarded, const SamplerConfig& cfg);

/// Chance that at least one of n_discarded independent points lands in the
/// region when each does with probability `rate`: 1 - (1 - rate)^n_discarded.
double probability_from_rate(double rate, std::uint64_t n_discarded);

/// 1 - prod(1 - p_i).
double compose_trajectory_probability(std::span<const double> segment_probs);

}  // namespace trajcomp
