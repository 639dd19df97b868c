#pragma once

// OpenMP kernels. Each has a serial reference elsewhere in the library
// (compress_dataset, rqc/rqc_linear, evaluate, generate_synthetic) and must
// return identical results for every thread count: work items are
// independent, seeded by index, and reduced in input order.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trajcomp/asp_tree.hpp"
#include "trajcomp/compressor.hpp"
#include "trajcomp/query.hpp"
#include "trajcomp/synthetic.hpp"

namespace trajcomp {

/// Number of threads used when `threads` is 0.
int default_thread_count();

DatasetCompression compress_dataset_parallel(const std::vector<RawTrajectory>& raw,
                                             const CompressionConfig& cfg, int threads);

std::vector<RawTrajectory> generate_synthetic_parallel(const GeneratorSpec& spec,
                                                       std::uint64_t seed, int threads);

/// Runs a batch of queries concurrently; `tree` == nullptr selects rqc_linear.
std::vector<QueryOutcome> run_queries_parallel(const std::vector<RangeQuery>& queries,
                                               const CompressedDataset& dataset,
                                               const AspTree* tree, int threads);

EvalReport evaluate_parallel(const std::vector<Rect>& queries,
                             const std::vector<RawTrajectory>& raw,
                             const CompressedDataset& dataset, const AspTree& tree,
                             const EvalSettings& settings, int threads);

}  // namespace trajcomp
