#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trajcomp/trajectory.hpp"

namespace trajcomp {

/// Parameters of the synthetic trajectory generator. A trajectory is a chain
/// of motif episodes, each chosen by weight:
///  - smooth: correlated random walk, heading noise `turn_sd` per step;
///  - zig-zag: heading alternates +-`zigzag_angle` around a base direction;
///  - U-turn: an outbound leg, then a reversal that runs back past the leg's
///    start, so chords across it have PED near 0 but large PSED.
struct GeneratorSpec {
  std::size_t trajectory_count = 100;
  std::size_t min_points = 100;
  std::size_t max_points = 1000;
  double step_mean = 10.0;
  double step_sd = 2.0;
  double turn_sd = 0.1;  ///< radians
  double zigzag_angle = 0.6;
  std::size_t zigzag_period_min = 2;
  std::size_t zigzag_period_max = 6;
  std::size_t uturn_leg_min = 15;
  std::size_t uturn_leg_max = 40;
  std::size_t episode_min = 30;
  std::size_t episode_max = 200;
  double weight_smooth = 1.0;
  double weight_zigzag = 1.0;
  double weight_uturn = 1.0;
  double extent = 10000.0;  ///< start points uniform in [0, extent]^2
  double jitter_sd = 0.0;   ///< isotropic position noise per point
  double sample_interval = 1.0;

  void validate() const;
};

/// Deterministic in (spec, seed); trajectory k depends only on (seed, k).
std::vector<RawTrajectory> generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed);

RawTrajectory generate_trajectory(const GeneratorSpec& spec, std::uint64_t seed, std::size_t index);

}  // namespace trajcomp
