#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "trajcomp/errors.hpp"
#include "trajcomp/synthetic.hpp"

namespace trajcomp {
namespace {

TEST(Synthetic, StraightWalkIsCollinear) {
  GeneratorSpec spec;
  spec.trajectory_count = 1;
  spec.min_points = spec.max_points = 4;
  spec.turn_sd = 0.0;
  spec.step_sd = 0.0;
  spec.weight_zigzag = spec.weight_uturn = 0.0;
  const auto raw = generate_synthetic(spec, 5);
  ASSERT_EQ(raw.size(), 1u);
  const auto& pts = raw[0].points;
  ASSERT_EQ(pts.size(), 4u);
  const Segment2 chord{pts.front().position(), pts.back().position()};
  for (const auto& p : pts) EXPECT_NEAR(psed(p.position(), chord), 0.0, 1e-9);
  EXPECT_NEAR(chord.length(), 3 * spec.step_mean, 1e-9);
}

TEST(Synthetic, DeterministicPerSeed) {
  GeneratorSpec spec;
  spec.trajectory_count = 20;
  spec.jitter_sd = 0.5;
  EXPECT_EQ(generate_synthetic(spec, 9), generate_synthetic(spec, 9));
  EXPECT_NE(generate_synthetic(spec, 9), generate_synthetic(spec, 10));
  // Trajectory k depends only on (seed, k).
  spec.trajectory_count = 5;
  const auto fewer = generate_synthetic(spec, 9);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(fewer[k], generate_trajectory(spec, 9, k));
}

TEST(Synthetic, LengthsAndTimestamps) {
  GeneratorSpec spec;
  spec.trajectory_count = 50;
  spec.min_points = 100;
  spec.max_points = 150;
  spec.sample_interval = 2.5;
  for (const auto& t : generate_synthetic(spec, 3)) {
    EXPECT_GE(t.points.size(), 100u);
    EXPECT_LE(t.points.size(), 150u);
    for (std::size_t i = 0; i < t.points.size(); ++i) EXPECT_EQ(t.points[i].t, 2.5 * static_cast<double>(i));
    EXPECT_NO_THROW(validate_raw(t));
  }
}

TEST(Synthetic, UTurnSeparatesPedFromPsed) {
  GeneratorSpec spec;
  spec.trajectory_count = 1;
  spec.min_points = spec.max_points = 300;
  spec.weight_smooth = spec.weight_zigzag = 0.0;
  spec.turn_sd = 0.01;
  const auto pts = generate_synthetic(spec, 4)[0].points;

  std::vector<double> steps;
  for (std::size_t i = 1; i < pts.size(); ++i) steps.push_back(distance(pts[i - 1].position(), pts[i].position()));
  std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
  const double median_step = steps[steps.size() / 2];

  double best = 0.0;
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    for (std::size_t j = i + 2; j < std::min(pts.size(), i + 130); ++j) {
      const Segment2 chord{pts[i].position(), pts[j].position()};
      if (chord.degenerate()) continue;
      for (std::size_t m = i + 1; m < j; ++m)
        best = std::max(best, psed(pts[m].position(), chord) - ped(pts[m].position(), chord));
    }
  }
  EXPECT_GT(best, 10.0 * median_step);
}

TEST(Synthetic, RejectsInvalidSpecs) {
  GeneratorSpec spec;
  spec.min_points = 0;
  EXPECT_THROW(spec.validate(), ConfigurationError);
  spec = {};
  spec.max_points = 10;
  spec.min_points = 20;
  EXPECT_THROW(spec.validate(), ConfigurationError);
  spec = {};
  spec.weight_smooth = spec.weight_zigzag = spec.weight_uturn = 0.0;
  EXPECT_THROW(spec.validate(), ConfigurationError);
  spec = {};
  spec.step_mean = 0.0;
  EXPECT_THROW(spec.validate(), ConfigurationError);
}

}  // namespace
}  // namespace trajcomp
