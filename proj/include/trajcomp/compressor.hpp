#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajcomp/trajectory.hpp"

namespace trajcomp {

struct CompressionConfig {
  double epsilon = 1.0;  ///< upper bound on the PSED of every discarded point

  void validate() const;
};

/// Evaluation counters for the one-pass compressor. Every raw point is
/// examined a bounded number of times, so total() grows linearly in N.
struct RoceCounters {
  std::uint64_t distance_checks = 0;
  std::uint64_t containment_checks = 0;
  std::uint64_t region_updates = 0;

  std::uint64_t total() const { return distance_checks + containment_checks + region_updates; }
};

/// Online one-pass compressor. From each anchor it skips points within epsilon,
/// then extends the segment while the next point lies in the candidate region;
/// the last accepted point closes the segment and becomes the next anchor.
/// Throws EmptyTrajectoryError / MalformedInputError on invalid input.
CompressedTrajectory roce_compress(const RawTrajectory& raw, const CompressionConfig& cfg,
                                   RoceCounters* counters = nullptr);

/// Indices of the raw points kept by roce_compress.
std::vector<std::size_t> roce_retained_indices(const std::vector<TrajectoryPoint>& points,
                                               double epsilon, RoceCounters* counters = nullptr);

/// Greedy reference compressor that re-checks every intermediate point's PSED
/// directly for each candidate end point. Quadratic; used as a test oracle.
CompressedTrajectory brute_force_compress(const RawTrajectory& raw, const CompressionConfig& cfg);

struct ErrorBoundReport {
  double max_psed = 0.0;
  std::optional<std::size_t> first_violation;  ///< raw point index

  bool ok() const { return !first_violation.has_value(); }
};

/// Raw indices of the retained points. Throws MismatchError when `compressed`
/// is not an endpoint-preserving subsequence of `raw` with consistent counts.
std::vector<std::size_t> match_retained(const RawTrajectory& raw,
                                        const CompressedTrajectory& compressed);

/// PSED of every discarded point against its covering segment.
ErrorBoundReport verify_error_bound(const RawTrajectory& raw, const CompressedTrajectory& compressed,
                                    double epsilon);

/// Running moments of discarded-point PSEDs. Per-trajectory partials are
/// merged in input order, so dataset totals do not depend on thread count.
struct DeviationAccumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double max = 0.0;

  void add(double d) {
    ++count;
    sum += d;
    sum_sq += d * d;
    if (d > max) max = d;
  }
  void merge(const DeviationAccumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    if (o.max > max) max = o.max;
  }
};

DeviationAccumulator discarded_deviations(const std::vector<TrajectoryPoint>& points,
                                          const std::vector<std::size_t>& retained);

struct CompressionStats {
  std::uint64_t raw_point_count = 0;
  std::uint64_t retained_point_count = 0;
  std::uint64_t discarded_point_count = 0;
  double compression_rate = 0.0;  ///< raw / retained
  double max_psed = 0.0;
  double avg_psed = 0.0;
  /// Zero-mean deviation: sqrt(mean of squared discarded-point PSEDs).
  double psed_std_dev = 0.0;
};

CompressionStats make_stats(std::uint64_t raw_points, std::uint64_t retained_points,
                            const DeviationAccumulator& deviations);

CompressionStats compute_stats(const RawTrajectory& raw, const CompressedTrajectory& compressed);

struct TrajectoryFailure {
  std::size_t index = 0;
  std::string id;
  std::string message;
};

struct DatasetCompression {
  CompressedDataset dataset;  ///< header.sigma holds the dataset deviation
  CompressionStats stats;
  std::vector<TrajectoryFailure> failures;  ///< failed trajectories are left out
};

/// Result of compressing one trajectory of a batch: either the compressed
/// trajectory with its deviation partials, or the failure.
struct TrajectoryOutcome {
  CompressedTrajectory compressed;
  DeviationAccumulator deviations;
  std::optional<TrajectoryFailure> failure;
};

TrajectoryOutcome compress_with_deviations(const RawTrajectory& raw, const CompressionConfig& cfg,
                                           std::size_t index);

/// Merges per-trajectory outcomes in input order into a dataset with header.
DatasetCompression finalize_dataset(std::vector<TrajectoryOutcome>&& outcomes,
                                    const CompressionConfig& cfg);

/// Serial reference; see compress_dataset_parallel for the OpenMP kernel.
DatasetCompression compress_dataset(const std::vector<RawTrajectory>& raw,
                                    const CompressionConfig& cfg);

/// Epsilon whose overall compression rate on `raw` is closest to `target_rate`
/// (log-scale bisection; the rate is monotone in epsilon up to small wobbles).
double epsilon_for_rate(const std::vector<RawTrajectory>& raw, double target_rate,
                        int iterations = 40);

}  // namespace trajcomp
