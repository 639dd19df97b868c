#include "trajcomp/parallel.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trajcomp {

namespace {

int resolve(int threads) { return threads > 0 ? threads : default_thread_count(); }

// Exceptions must not escape an OpenMP region; the first one (by item index)
// is rethrown after the loop so the error matches the serial reference.
class FirstError {
 public:
  explicit FirstError(std::size_t n) : errors_(n) {}
  void capture(std::size_t i) { errors_[i] = std::current_exception(); }
  void rethrow() const {
    for (const auto& e : errors_)
      if (e) std::rethrow_exception(e);
  }

 private:
  std::vector<std::exception_ptr> errors_;
};

}  // namespace

int default_thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

DatasetCompression compress_dataset_parallel(const std::vector<RawTrajectory>& raw,
                                             const CompressionConfig& cfg, int threads) {
  cfg.validate();
  const auto n = static_cast<std::ptrdiff_t>(raw.size());
  std::vector<TrajectoryOutcome> outcomes(raw.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve(threads))
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const auto i = static_cast<std::size_t>(t);
    outcomes[i] = compress_with_deviations(raw[i], cfg, i);
  }
  return finalize_dataset(std::move(outcomes), cfg);
}

std::vector<RawTrajectory> generate_synthetic_parallel(const GeneratorSpec& spec,
                                                       std::uint64_t seed, int threads) {
  spec.validate();
  std::vector<RawTrajectory> out(spec.trajectory_count);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve(threads))
  for (std::ptrdiff_t k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = generate_trajectory(spec, seed, static_cast<std::size_t>(k));
  return out;
}

std::vector<QueryOutcome> run_queries_parallel(const std::vector<RangeQuery>& queries,
                                               const CompressedDataset& dataset,
                                               const AspTree* tree, int threads) {
  std::vector<QueryOutcome> out(queries.size());
  FirstError errors(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve(threads))
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const auto i = static_cast<std::size_t>(q);
    try {
      out[i] = tree ? rqc(queries[i], dataset, *tree) : rqc_linear(queries[i], dataset);
    } catch (...) {
      errors.capture(i);
    }
  }
  errors.rethrow();
  return out;
}

EvalReport evaluate_parallel(const std::vector<Rect>& queries,
                             const std::vector<RawTrajectory>& raw,
                             const CompressedDataset& dataset, const AspTree& tree,
                             const EvalSettings& settings, int threads) {
  check_correspondence(raw, dataset);
  std::vector<QueryMetrics> metrics(queries.size());
  FirstError errors(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve(threads))
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    const auto i = static_cast<std::size_t>(q);
    try {
      metrics[i] = score_query(query_raw(queries[i], raw),
                               answer_query(queries[i], dataset, tree, settings, i));
    } catch (...) {
      errors.capture(i);
    }
  }
  errors.rethrow();
  return summarize(std::move(metrics));
}

}  // namespace trajcomp
