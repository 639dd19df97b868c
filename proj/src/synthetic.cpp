#include "trajcomp/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trajcomp/errors.hpp"
#include "trajcomp/rng.hpp"

namespace trajcomp {

namespace {

enum class Motif { kSmooth, kZigzag, kUturn };

class Walker {
 public:
  Walker(const GeneratorSpec& spec, Rng& rng, RawTrajectory& out)
      : spec_(spec), rng_(rng), out_(out) {}

  void start(double x, double y, double heading) {
    x_ = x;
    y_ = y;
    heading_ = heading;
    emit();
  }

  bool full(std::size_t target) const { return out_.points.size() >= target; }

  void step(double heading) {
    double len = spec_.step_mean;
    if (spec_.step_sd > 0.0) len = std::abs(std::normal_distribution<double>(spec_.step_mean, spec_.step_sd)(rng_));
    x_ += len * std::cos(heading);
    y_ += len * std::sin(heading);
    emit();
  }

  double heading() const { return heading_; }
  void set_heading(double h) { heading_ = h; }

 private:
  void emit() {
    double jx = 0.0;
    double jy = 0.0;
    if (spec_.jitter_sd > 0.0) {
      std::normal_distribution<double> jitter(0.0, spec_.jitter_sd);
      jx = jitter(rng_);
      jy = jitter(rng_);
    }
    const double t = static_cast<double>(out_.points.size()) * spec_.sample_interval;
    out_.points.push_back({x_ + jx, y_ + jy, t});
  }

  const GeneratorSpec& spec_;
  Rng& rng_;
  RawTrajectory& out_;
  double x_ = 0.0;
  double y_ = 0.0;
  double heading_ = 0.0;
};

std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double turn(Rng& rng, double sd) {
  return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (min_points < 1 || max_points < min_points)
    throw ConfigurationError("generator: need 1 <= min_points <= max_points");
  if (!(step_mean > 0.0) || !(step_sd >= 0.0) || !(turn_sd >= 0.0) || !(jitter_sd >= 0.0))
    throw ConfigurationError("generator: step_mean must be > 0, deviations >= 0");
  if (!(sample_interval > 0.0)) throw ConfigurationError("generator: sample_interval must be > 0");
  if (!(extent >= 0.0)) throw ConfigurationError("generator: extent must be >= 0");
  if (zigzag_period_min < 1 || zigzag_period_max < zigzag_period_min)
    throw ConfigurationError("generator: invalid zig-zag period range");
  if (uturn_leg_min < 1 || uturn_leg_max < uturn_leg_min)
    throw ConfigurationError("generator: invalid U-turn leg range");
  if (episode_min < 1 || episode_max < episode_min)
    throw ConfigurationError("generator: invalid episode length range");
  if (weight_smooth < 0.0 || weight_zigzag < 0.0 || weight_uturn < 0.0 ||
      weight_smooth + weight_zigzag + weight_uturn <= 0.0)
    throw ConfigurationError("generator: motif weights must be >= 0 with a positive sum");
}

RawTrajectory generate_trajectory(const GeneratorSpec& spec, std::uint64_t seed, std::size_t index) {
  Rng rng(derive_seed(seed, index));
  RawTrajectory traj;
  traj.id = "T" + std::to_string(index);
  const std::size_t target = uniform_count(rng, spec.min_points, spec.max_points);
  traj.points.reserve(target);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Walker walker(spec, rng, traj);
  walker.start(unit(rng) * spec.extent, unit(rng) * spec.extent,
               (2.0 * unit(rng) - 1.0) * std::numbers::pi);

  std::discrete_distribution<int> pick({spec.weight_smooth, spec.weight_zigzag, spec.weight_uturn});
  while (!walker.full(target)) {
    const auto motif = static_cast<Motif>(pick(rng));
    switch (motif) {
      case Motif::kSmooth: {
        const std::size_t len = uniform_count(rng, spec.episode_min, spec.episode_max);
        for (std::size_t k = 0; k < len && !walker.full(target); ++k) {
          walker.set_heading(walker.heading() + turn(rng, spec.turn_sd));
          walker.step(walker.heading());
        }
        break;
      }
      case Motif::kZigzag: {
        const std::size_t len = uniform_count(rng, spec.episode_min, spec.episode_max);
        const std::size_t period = uniform_count(rng, spec.zigzag_period_min, spec.zigzag_period_max);
        double side = 1.0;
        for (std::size_t k = 0; k < len && !walker.full(target); ++k) {
          if (k % period == 0) side = -side;
          walker.set_heading(walker.heading() + turn(rng, spec.turn_sd));
          walker.step(walker.heading() + side * spec.zigzag_angle);
        }
        break;
      }
      case Motif::kUturn: {
        const std::size_t leg = uniform_count(rng, spec.uturn_leg_min, spec.uturn_leg_max);
        for (std::size_t k = 0; k < leg && !walker.full(target); ++k) walker.step(walker.heading());
        walker.set_heading(walker.heading() + std::numbers::pi + turn(rng, spec.turn_sd));
        for (std::size_t k = 0; k < 2 * leg && !walker.full(target); ++k) walker.step(walker.heading());
        break;
      }
    }
  }
  return traj;
}

std::vector<RawTrajectory> generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<RawTrajectory> out(spec.trajectory_count);
  for (std::size_t k = 0; k < spec.trajectory_count; ++k) out[k] = generate_trajectory(spec, seed, k);
  return out;
}

}  // namespace trajcomp
