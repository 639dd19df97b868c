#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trajcomp/asp_tree.hpp"
#include "trajcomp/geometry.hpp"
#include "trajcomp/trajectory.hpp"
#include "trajcomp/uncertainty.hpp"

namespace trajcomp {

using TrajectoryIndex = std::uint32_t;

struct RangeQuery {
  Rect region;
  double probability_threshold = 0.5;  ///< accept when P > threshold
  SamplerConfig sampler;               ///< sampler.seed is the per-query master seed

  void validate() const;
};

struct StageTimings {
  double filter_seconds = 0.0;
  double mbr_seconds = 0.0;
  double endpoint_seconds = 0.0;
  double probability_seconds = 0.0;
};

/// Result of one range query, split by the stage that accepted each
/// trajectory. Every list is sorted; the lists are pairwise disjoint.
struct QueryOutcome {
  std::vector<TrajectoryIndex> accepted_by_mbr;          ///< run MBR inside the region
  std::vector<TrajectoryIndex> accepted_by_endpoints;    ///< retained point inside the region
  std::vector<TrajectoryIndex> accepted_by_probability;  ///< estimated probability above p
  std::size_t candidate_runs = 0;                        ///< after the index filter
  std::size_t runs_after_mbr = 0;                        ///< undecided runs after MBR pruning
  std::size_t trajectories_sampled = 0;                  ///< reached probabilistic verification
  StageTimings timings;

  /// Sorted union of the three partitions.
  std::vector<TrajectoryIndex> result() const;
};

/// Smallest rectangle containing the stadiums of every segment in `run`.
Rect run_mbr(const CompressedTrajectory& traj, const SegmentRun& run, double epsilon);

/// Seed of the sampler stream for one segment of one trajectory.
std::uint64_t segment_seed(std::uint64_t query_seed, TrajectoryIndex trajectory,
                           std::size_t segment);

/// Probability that the raw trajectory behind `traj` meets the query region,
/// composed over the given segments (sorted, ascending). Segments whose
/// stadium misses the region contribute 0 without sampling.
double trajectory_probability(const CompressedTrajectory& traj, TrajectoryIndex index,
                              const std::vector<std::uint32_t>& segments, const RangeQuery& query,
                              double epsilon);

/// Filter-and-verify range query: index filter, MBR pruning, endpoint check,
/// probabilistic verification. Throws ConfigurationError when the tree was
/// built for another dataset or epsilon.
QueryOutcome rqc(const RangeQuery& query, const CompressedDataset& dataset, const AspTree& tree);

/// Index-free variant running the same verification stages over every
/// segment of every trajectory. Same result set as rqc for the same seed.
QueryOutcome rqc_linear(const RangeQuery& query, const CompressedDataset& dataset);

/// Raw trajectories with at least one point inside `region`.
std::vector<TrajectoryIndex> query_raw(const Rect& region, const std::vector<RawTrajectory>& raw);

/// Compressed trajectories with at least one retained point inside `region`.
std::vector<TrajectoryIndex> query_compressed_traditional(const Rect& region,
                                                          const CompressedDataset& dataset);

enum class QueryMode { kTraditional, kProbabilistic };

struct QueryMetrics {
  std::size_t raw_hits = 0;         ///< |Q_R|
  std::size_t compressed_hits = 0;  ///< |Q_C|
  std::size_t common_hits = 0;      ///< |Q_R n Q_C|
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool skipped = false;  ///< both result sets empty; excluded from averages
};

/// Precision, recall and F1 of a compressed-data answer against the raw answer.
/// One empty set (but not both) scores 0 on all three metrics.
QueryMetrics score_query(const std::vector<TrajectoryIndex>& raw_result,
                         const std::vector<TrajectoryIndex>& compressed_result);

struct EvalReport {
  std::vector<QueryMetrics> per_query;
  std::size_t evaluated = 0;  ///< queries not skipped
  double avg_precision = 0.0;
  double avg_recall = 0.0;
  double avg_f1 = 0.0;
};

EvalReport summarize(std::vector<QueryMetrics> per_query);

struct EvalSettings {
  QueryMode mode = QueryMode::kProbabilistic;
  double probability_threshold = 0.5;
  SamplerConfig sampler;  ///< sampler.seed is the batch master seed
};

/// Seed of query `index` within a batch.
std::uint64_t query_seed(std::uint64_t batch_seed, std::size_t index);

RangeQuery make_query(const Rect& region, const EvalSettings& settings, std::size_t index);

/// Answer of one query in the chosen mode (the tree is used in probabilistic mode).
std::vector<TrajectoryIndex> answer_query(const Rect& region, const CompressedDataset& dataset,
                                          const AspTree& tree, const EvalSettings& settings,
                                          std::size_t index);

/// Serial reference evaluation; see evaluate_parallel for the OpenMP kernel.
/// Throws MismatchError unless raw and compressed datasets correspond by id.
EvalReport evaluate(const std::vector<Rect>& queries, const std::vector<RawTrajectory>& raw,
                    const CompressedDataset& dataset, const AspTree& tree,
                    const EvalSettings& settings);

void check_correspondence(const std::vector<RawTrajectory>& raw, const CompressedDataset& dataset);

/// Square-ish query rectangles: centres uniform in `bounds`, areas uniform in
/// [min_area, max_area], width/height = aspect.
std::vector<Rect> generate_query_batch(const Rect& bounds, std::size_t count, double min_area,
                                       double max_area, double aspect, std::uint64_t seed);

}  // namespace trajcomp
