#include <gtest/gtest.h>

#include <algorithm>
#include <iterator>

#include "support.hpp"
#include "trajcomp/errors.hpp"
#include "trajcomp/query.hpp"

namespace trajcomp {
namespace {

using testing::make_raw;

bool is_subset(const std::vector<TrajectoryIndex>& a, const std::vector<TrajectoryIndex>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Fixture {
  std::vector<RawTrajectory> raw;
  CompressedDataset dataset;
  AspTree tree;
};

Fixture make_fixture(std::size_t count, std::uint64_t seed, double rate = 30.0, std::size_t xi = 16) {
  Fixture f;
  f.raw = testing::mixed_dataset(count, 60, 400, seed, 3000.0);
  const double eps = epsilon_for_rate(f.raw, rate, 25);
  f.dataset = compress_dataset(f.raw, {eps}).dataset;
  f.tree = AspTree::build(f.dataset.trajectories, {xi, eps});
  return f;
}

std::vector<Rect> random_regions(const Rect& bounds, std::size_t n, std::uint64_t seed) {
  const double area = bounds.width() * bounds.height();
  return generate_query_batch(bounds, n, area * 1e-3, area * 2e-2, 1.0, seed);
}

// Three trajectories, each accepted by a different stage.
CompressedDataset stage_fixture() {
  CompressedDataset d;
  d.header.epsilon = 0.1;
  d.header.sigma = 0.05;
  auto traj = [](std::string id, std::vector<TrajectoryPoint> pts, std::vector<std::uint64_t> n_d) {
    return CompressedTrajectory{std::move(id), std::move(pts), std::move(n_d), 0.1};
  };
  d.trajectories.push_back(traj("inside", {{1, 1, 0}, {2, 2, 10}}, {9}));
  d.trajectories.push_back(traj("leaves", {{5, 5, 0}, {20, 5, 10}}, {9}));
  d.trajectories.push_back(traj("crosses", {{-5, 3, 0}, {15, 3, 100}}, {99}));
  d.trajectories.push_back(traj("far", {{50, 50, 0}, {60, 50, 10}}, {9}));
  d.header.trajectory_count = d.trajectories.size();
  return d;
}

TEST(Rqc, OneTrajectoryPerStage) {
  const auto d = stage_fixture();
  const auto tree = AspTree::build(d.trajectories, {2, 0.1});
  RangeQuery q{{0, 0, 10, 10}, 0.5, {d.header.sigma, 15, 7}};
  for (const auto& out : {rqc(q, d, tree), rqc_linear(q, d)}) {
    EXPECT_EQ(out.accepted_by_mbr, (std::vector<TrajectoryIndex>{0}));
    EXPECT_EQ(out.accepted_by_endpoints, (std::vector<TrajectoryIndex>{1}));
    EXPECT_EQ(out.accepted_by_probability, (std::vector<TrajectoryIndex>{2}));
    EXPECT_EQ(out.result(), (std::vector<TrajectoryIndex>{0, 1, 2}));
    EXPECT_EQ(out.trajectories_sampled, 1u);
  }
}

TEST(Rqc, WholeBoundsAcceptsEverythingByMbr) {
  const auto f = make_fixture(40, 61);
  const Rect all = dataset_bounds(f.dataset.trajectories).expanded(f.dataset.header.epsilon);
  const auto out = rqc({all, 0.5, {f.dataset.header.sigma, 15, 1}}, f.dataset, f.tree);
  EXPECT_EQ(out.accepted_by_mbr.size(), f.dataset.trajectories.size());
  EXPECT_TRUE(out.accepted_by_endpoints.empty());
  EXPECT_TRUE(out.accepted_by_probability.empty());
}

TEST(Rqc, DisjointRegionIsEmpty) {
  const auto f = make_fixture(20, 62);
  const auto out = rqc({{1e7, 1e7, 1e7 + 5, 1e7 + 5}, 0.5, {f.dataset.header.sigma, 15, 1}}, f.dataset, f.tree);
  EXPECT_TRUE(out.result().empty());
  EXPECT_EQ(out.candidate_runs, 0u);
}

TEST(Rqc, EmptyDataset) {
  CompressedDataset d;
  d.header.epsilon = 1.0;
  const auto tree = AspTree::build({}, {4, 1.0});
  const RangeQuery q{{0, 0, 1, 1}, 0.5, {0.5, 15, 1}};
  EXPECT_TRUE(rqc(q, d, tree).result().empty());
  EXPECT_TRUE(rqc_linear(q, d).result().empty());
}

TEST(Rqc, MatchesLinearScan) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto f = make_fixture(30 + 10 * seed, 100 + seed, 10.0 + 15.0 * static_cast<double>(seed % 4),
                                2 + 4 * (seed % 5));
    const auto regions = random_regions(dataset_bounds(f.raw), 40, seed);
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const RangeQuery q{regions[i], 0.1 * static_cast<double>(i % 9), {f.dataset.header.sigma, 15, seed * 1000 + i}};
      ASSERT_EQ(rqc(q, f.dataset, f.tree).result(), rqc_linear(q, f.dataset).result())
          << "seed " << seed << " query " << i;
    }
  }
}

TEST(Rqc, DeterministicStages) {
  const auto f = make_fixture(60, 63);
  for (const auto& r : random_regions(dataset_bounds(f.raw), 30, 5)) {
    const RangeQuery q{r, 0.5, {f.dataset.header.sigma, 15, 99}};
    const auto a = rqc(q, f.dataset, f.tree);
    const auto b = rqc(q, f.dataset, f.tree);
    EXPECT_EQ(a.accepted_by_mbr, b.accepted_by_mbr);
    EXPECT_EQ(a.accepted_by_endpoints, b.accepted_by_endpoints);
    EXPECT_EQ(a.accepted_by_probability, b.accepted_by_probability);
  }
}

TEST(Rqc, DeterministicStagesAreSound) {
  const auto f = make_fixture(80, 64);
  std::size_t checked = 0;
  for (const auto& r : random_regions(dataset_bounds(f.raw), 200, 6)) {
    const auto out = rqc({r, 0.5, {f.dataset.header.sigma, 15, 3}}, f.dataset, f.tree);
    const auto truth = query_raw(r, f.raw);
    for (const auto* stage : {&out.accepted_by_mbr, &out.accepted_by_endpoints}) {
      EXPECT_TRUE(is_subset(*stage, truth));
      checked += stage->size();
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(Rqc, MonotoneInThreshold) {
  const auto f = make_fixture(80, 65, 80.0);
  for (const auto& r : random_regions(dataset_bounds(f.raw), 60, 7)) {
    std::vector<TrajectoryIndex> previous;
    bool first = true;
    for (double p : {0.0, 0.2, 0.5, 0.8, 0.99}) {
      const auto res = rqc({r, p, {f.dataset.header.sigma, 15, 11}}, f.dataset, f.tree).result();
      if (!first) {
        EXPECT_TRUE(is_subset(res, previous)) << "p " << p;
      }
      previous = res;
      first = false;
    }
  }
}

TEST(Rqc, MonotoneInRegion) {
  const auto f = make_fixture(80, 66, 80.0);
  for (const auto& r : random_regions(dataset_bounds(f.raw), 60, 8)) {
    const RangeQuery inner{r, 0.3, {f.dataset.header.sigma, 15, 12}};
    RangeQuery outer = inner;
    outer.region = r.expanded(r.width() * 0.2);
    EXPECT_TRUE(is_subset(rqc(inner, f.dataset, f.tree).result(), rqc(outer, f.dataset, f.tree).result()));
  }
}

TEST(Rqc, RejectsMismatchedIndex) {
  const auto f = make_fixture(10, 67);
  const RangeQuery q{{0, 0, 1, 1}, 0.5, {1.0, 15, 1}};
  const auto other = AspTree::build(f.dataset.trajectories, {16, f.dataset.header.epsilon * 2});
  EXPECT_THROW(rqc(q, f.dataset, other), ConfigurationError);
  std::vector<CompressedTrajectory> fewer(f.dataset.trajectories.begin(), f.dataset.trajectories.begin() + 5);
  EXPECT_THROW(rqc(q, f.dataset, AspTree::build(fewer, {16, f.dataset.header.epsilon})), ConfigurationError);
}

TEST(RangeQuery, Validation) {
  EXPECT_THROW((RangeQuery{{1, 0, 0, 1}, 0.5, {}}.validate()), ConfigurationError);
  EXPECT_THROW((RangeQuery{{0, 0, 1, 1}, 1.0, {}}.validate()), ConfigurationError);
  EXPECT_THROW((RangeQuery{{0, 0, 1, 1}, -0.1, {}}.validate()), ConfigurationError);
}

TEST(Traditional, CrossingBetweenSamplesIsMissed) {
  const std::vector<RawTrajectory> raw{make_raw("cross", {{0, 0}, {5, 0.05}, {10, 0}})};
  const auto d = compress_dataset(raw, {0.5}).dataset;
  ASSERT_EQ(d.trajectories[0].retained.size(), 2u);
  const Rect r{4, -1, 6, 1};
  EXPECT_EQ(query_raw(r, raw), (std::vector<TrajectoryIndex>{0}));
  EXPECT_TRUE(query_compressed_traditional(r, d).empty());
  EXPECT_EQ(query_compressed_traditional({-1, -1, 11, 1}, d), (std::vector<TrajectoryIndex>{0}));
}

TEST(Traditional, SubsetOfRawAnswer) {
  const auto f = make_fixture(80, 68, 50.0);
  for (const auto& r : random_regions(dataset_bounds(f.raw), 200, 9))
    EXPECT_TRUE(is_subset(query_compressed_traditional(r, f.dataset), query_raw(r, f.raw)));
}

TEST(QueryRaw, MatchesPointScan) {
  const auto f = make_fixture(30, 69);
  for (const auto& r : random_regions(dataset_bounds(f.raw), 50, 10)) {
    std::vector<TrajectoryIndex> expected;
    for (std::size_t t = 0; t < f.raw.size(); ++t) {
      for (const auto& p : f.raw[t].points) {
        if (p.x >= r.min_x && p.x <= r.max_x && p.y >= r.min_y && p.y <= r.max_y) {
          expected.push_back(static_cast<TrajectoryIndex>(t));
          break;
        }
      }
    }
    EXPECT_EQ(query_raw(r, f.raw), expected);
  }
}

TEST(Metrics, Arithmetic) {
  const auto m = score_query({0, 1, 2}, {1, 2, 3});
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);

  const auto same = score_query({4, 5}, {4, 5});
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.f1, 1.0);

  EXPECT_TRUE(score_query({}, {}).skipped);
  const auto missed = score_query({1}, {});
  EXPECT_FALSE(missed.skipped);
  EXPECT_EQ(missed.precision, 0.0);
  EXPECT_EQ(missed.recall, 0.0);
  EXPECT_EQ(missed.f1, 0.0);
  const auto spurious = score_query({}, {1});
  EXPECT_EQ(spurious.precision, 0.0);
  EXPECT_EQ(spurious.f1, 0.0);
}

TEST(Metrics, SummarySkipsEmptyQueries) {
  const auto report = summarize({score_query({0, 1}, {1}), score_query({}, {}), score_query({2}, {2})});
  EXPECT_EQ(report.evaluated, 2u);
  EXPECT_DOUBLE_EQ(report.avg_precision, 1.0);
  EXPECT_DOUBLE_EQ(report.avg_recall, 0.75);
}

TEST(Evaluate, TraditionalPrecisionIsOne) {
  const auto f = make_fixture(100, 70, 50.0);
  const auto regions = random_regions(dataset_bounds(f.raw), 300, 11);
  const auto report = evaluate(regions, f.raw, f.dataset, f.tree,
                               {QueryMode::kTraditional, 0.5, {f.dataset.header.sigma, 15, 1}});
  std::size_t nonempty = 0;
  for (const auto& m : report.per_query) {
    if (m.compressed_hits == 0) continue;
    ++nonempty;
    EXPECT_EQ(m.precision, 1.0);
  }
  EXPECT_GT(nonempty, 50u);
}

TEST(Evaluate, ProbabilisticRecallBeatsTraditional) {
  const auto f = make_fixture(150, 71, 100.0);
  const auto regions = random_regions(dataset_bounds(f.raw), 300, 12);
  const SamplerConfig sampler{f.dataset.header.sigma, 15, 5};
  const auto trad = evaluate(regions, f.raw, f.dataset, f.tree, {QueryMode::kTraditional, 0.5, sampler});
  const auto prob = evaluate(regions, f.raw, f.dataset, f.tree, {QueryMode::kProbabilistic, 0.5, sampler});
  EXPECT_GT(prob.avg_recall, trad.avg_recall);
}

TEST(Evaluate, RejectsMismatchedDatasets) {
  const auto f = make_fixture(10, 72);
  auto raw = f.raw;
  raw[3].id = "other";
  EXPECT_THROW(evaluate({}, raw, f.dataset, f.tree, {}), MismatchError);
  raw.pop_back();
  EXPECT_THROW(evaluate({}, raw, f.dataset, f.tree, {}), MismatchError);
}

TEST(QueryBatch, ShapesAndDeterminism) {
  const Rect bounds{0, 0, 1000, 500};
  const auto a = generate_query_batch(bounds, 500, 100, 400, 2.0, 3);
  EXPECT_EQ(a, generate_query_batch(bounds, 500, 100, 400, 2.0, 3));
  for (const auto& r : a) {
    const double area = r.width() * r.height();
    EXPECT_GE(area, 100 - 1e-9);
    EXPECT_LE(area, 400 + 1e-9);
    EXPECT_NEAR(r.width() / r.height(), 2.0, 1e-9);
    const Point2 c{(r.min_x + r.max_x) / 2, (r.min_y + r.max_y) / 2};
    EXPECT_TRUE(rect_contains(bounds, c));
  }
  EXPECT_TRUE(generate_query_batch({}, 0, 1, 2, 1, 1).empty());
  EXPECT_THROW(generate_query_batch(bounds, 5, 0, 2, 1, 1), ConfigurationError);
}

}  // namespace
}  // namespace trajcomp
