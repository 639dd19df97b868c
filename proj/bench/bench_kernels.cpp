// Serial reference vs OpenMP kernels, and the index vs a linear scan.
// Thread count is the benchmark argument; 0 rows are the serial references.

#include <benchmark/benchmark.h>

#include "trajcomp/asp_tree.hpp"
#include "trajcomp/compressor.hpp"
#include "trajcomp/parallel.hpp"
#include "trajcomp/query.hpp"
#include "trajcomp/synthetic.hpp"

namespace trajcomp {
namespace {

struct Fixture {
  std::vector<RawTrajectory> raw;
  CompressedDataset dataset;
  AspTree tree;
  std::vector<RangeQuery> queries;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture f;
    GeneratorSpec spec;
    spec.trajectory_count = 1000;
    spec.min_points = 300;
    spec.max_points = 1500;
    f.raw = generate_synthetic(spec, 11);
    f.dataset = compress_dataset(f.raw, {20.0}).dataset;
    f.tree = AspTree::build(f.dataset.trajectories, {32, 20.0});
    const auto bounds = dataset_bounds(f.raw);
    const double area = bounds.width() * bounds.height();
    const auto regions = generate_query_batch(bounds, 200, 2e-4 * area, 1.2e-3 * area, 1.0, 12);
    const EvalSettings settings{QueryMode::kProbabilistic, 0.5, {f.dataset.header.sigma, 15, 13}};
    for (std::size_t i = 0; i < regions.size(); ++i) f.queries.push_back(make_query(regions[i], settings, i));
    return f;
  }();
  return f;
}

std::int64_t raw_points(const Fixture& f) {
  std::int64_t n = 0;
  for (const auto& t : f.raw) n += static_cast<std::int64_t>(t.points.size());
  return n;
}

void BM_Compress(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = threads == 0 ? compress_dataset(f.raw, {20.0}) : compress_dataset_parallel(f.raw, {20.0}, threads);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * raw_points(f));
}
BENCHMARK(BM_Compress)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_QueryBatch(benchmark::State& state) {
  const auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    if (threads == 0) {
      for (const auto& q : f.queries) benchmark::DoNotOptimize(rqc(q, f.dataset, f.tree));
    } else {
      benchmark::DoNotOptimize(run_queries_parallel(f.queries, f.dataset, &f.tree, threads));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.queries.size()));
}
BENCHMARK(BM_QueryBatch)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Rqc(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    for (const auto& q : f.queries) benchmark::DoNotOptimize(rqc(q, f.dataset, f.tree));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.queries.size()));
}
BENCHMARK(BM_Rqc)->Unit(benchmark::kMillisecond);

void BM_RqcLinear(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    for (const auto& q : f.queries) benchmark::DoNotOptimize(rqc_linear(q, f.dataset));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.queries.size()));
}
BENCHMARK(BM_RqcLinear)->Unit(benchmark::kMillisecond);

void BM_BuildIndex(benchmark::State& state) {
  const auto& f = fixture();
  const auto xi = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AspTree::build(f.dataset.trajectories, {xi, 20.0}));
}
BENCHMARK(BM_BuildIndex)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trajcomp

BENCHMARK_MAIN();
