#include "trajcomp/compressor.hpp"

#include <algorithm>
#include <cmath>

#include "trajcomp/errors.hpp"
#include "trajcomp/geometry.hpp"

namespace trajcomp {

void CompressionConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ConfigurationError("epsilon must be positive and finite");
}

std::vector<std::size_t> roce_retained_indices(const std::vector<TrajectoryPoint>& points,
                                               double epsilon, RoceCounters* counters) {
  RoceCounters local;
  RoceCounters& c = counters ? *counters : local;
  const std::size_t n = points.size();
  std::vector<std::size_t> kept;
  if (n == 0) return kept;
  kept.push_back(0);

  std::size_t start = 0;
  while (start + 1 < n) {
    const Point2 anchor = points[start].position();
    CandidateRegion region(anchor);
    std::size_t i = start + 1;
    // Any segment from the anchor passes within epsilon of these points.
    while (i < n) {
      ++c.distance_checks;
      if (distance(anchor, points[i].position()) > epsilon) break;
      ++i;
    }
    while (i < n) {
      ++c.containment_checks;
      if (!region.contains(points[i].position())) break;
      ++c.region_updates;
      region.update(points[i].position(), epsilon);
      ++i;
    }
    start = i - 1;
    kept.push_back(start);
  }
  return kept;
}

namespace {

CompressedTrajectory assemble(const RawTrajectory& raw, const std::vector<std::size_t>& kept,
                              double epsilon) {
  CompressedTrajectory out;
  out.id = raw.id;
  out.epsilon = epsilon;
  out.retained.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.retained.push_back(raw.points[kept[k]]);
    if (k > 0) out.discarded_counts.push_back(kept[k] - kept[k - 1] - 1);
  }
  return out;
}

Segment2 segment_between(const std::vector<TrajectoryPoint>& pts, std::size_t a, std::size_t b) {
  return {pts[a].position(), pts[b].position()};
}

}  // namespace

CompressedTrajectory roce_compress(const RawTrajectory& raw, const CompressionConfig& cfg,
                                   RoceCounters* counters) {
  cfg.validate();
  validate_raw(raw);
  return assemble(raw, roce_retained_indices(raw.points, cfg.epsilon, counters), cfg.epsilon);
}

CompressedTrajectory brute_force_compress(const RawTrajectory& raw, const CompressionConfig& cfg) {
  cfg.validate();
  validate_raw(raw);
  const auto& pts = raw.points;
  const std::size_t n = pts.size();
  std::vector<std::size_t> kept{0};
  std::size_t start = 0;
  while (start + 1 < n) {
    std::size_t end = start + 1;
    while (end + 1 < n) {
      const Segment2 seg = segment_between(pts, start, end + 1);
      bool bounded = true;
      for (std::size_t m = start + 1; m <= end && bounded; ++m)
        bounded = psed(pts[m].position(), seg) <= cfg.epsilon;
      if (!bounded) break;
      ++end;
    }
    kept.push_back(end);
    start = end;
  }
  return assemble(raw, kept, cfg.epsilon);
}

std::vector<std::size_t> match_retained(const RawTrajectory& raw,
                                        const CompressedTrajectory& compressed) {
  const auto& pts = raw.points;
  if (compressed.retained.empty() || pts.empty())
    throw MismatchError("trajectory '" + raw.id + "': empty raw or compressed trajectory");
  if (compressed.discarded_counts.size() + 1 != compressed.retained.size())
    throw MismatchError("trajectory '" + raw.id + "': segment count does not match retained points");

  std::vector<std::size_t> idx;
  idx.reserve(compressed.retained.size());
  std::size_t i = 0;
  for (const auto& r : compressed.retained) {
    while (i < pts.size() && !(pts[i] == r)) ++i;
    if (i == pts.size())
      throw MismatchError("trajectory '" + raw.id + "': compressed points are not a subsequence");
    idx.push_back(i++);
  }
  if (idx.front() != 0 || idx.back() != pts.size() - 1)
    throw MismatchError("trajectory '" + raw.id + "': first and last raw points must be retained");
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (compressed.discarded_counts[k - 1] != idx[k] - idx[k - 1] - 1)
      throw MismatchError("trajectory '" + raw.id + "': discarded count mismatch at segment " +
                          std::to_string(k - 1));
  }
  return idx;
}

ErrorBoundReport verify_error_bound(const RawTrajectory& raw, const CompressedTrajectory& compressed,
                                    double epsilon) {
  const auto idx = match_retained(raw, compressed);
  ErrorBoundReport report;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const Segment2 seg = segment_between(raw.points, idx[k - 1], idx[k]);
    for (std::size_t m = idx[k - 1] + 1; m < idx[k]; ++m) {
      const double d = psed(raw.points[m].position(), seg);
      if (d > report.max_psed) report.max_psed = d;
      if (d > epsilon && !report.first_violation) report.first_violation = m;
    }
  }
  return report;
}

DeviationAccumulator discarded_deviations(const std::vector<TrajectoryPoint>& points,
                                          const std::vector<std::size_t>& retained) {
  DeviationAccumulator acc;
  for (std::size_t k = 1; k < retained.size(); ++k) {
    const Segment2 seg = segment_between(points, retained[k - 1], retained[k]);
    for (std::size_t m = retained[k - 1] + 1; m < retained[k]; ++m)
      acc.add(psed(points[m].position(), seg));
  }
  return acc;
}

CompressionStats make_stats(std::uint64_t raw_points, std::uint64_t retained_points,
                            const DeviationAccumulator& deviations) {
  CompressionStats s;
  s.raw_point_count = raw_points;
  s.retained_point_count = retained_points;
  s.discarded_point_count = deviations.count;
  s.compression_rate =
      retained_points == 0 ? 0.0 : static_cast<double>(raw_points) / static_cast<double>(retained_points);
  if (deviations.count > 0) {
    const double n = static_cast<double>(deviations.count);
    s.max_psed = deviations.max;
    s.avg_psed = deviations.sum / n;
    s.psed_std_dev = std::sqrt(deviations.sum_sq / n);
  }
  return s;
}

CompressionStats compute_stats(const RawTrajectory& raw, const CompressedTrajectory& compressed) {
  const auto idx = match_retained(raw, compressed);
  return make_stats(raw.points.size(), compressed.retained.size(),
                    discarded_deviations(raw.points, idx));
}

TrajectoryOutcome compress_with_deviations(const RawTrajectory& raw, const CompressionConfig& cfg,
                                           std::size_t index) {
  TrajectoryOutcome out;
  try {
    validate_raw(raw);
    const auto kept = roce_retained_indices(raw.points, cfg.epsilon);
    out.deviations = discarded_deviations(raw.points, kept);
    out.compressed = assemble(raw, kept, cfg.epsilon);
  } catch (const DomainError& e) {
    out.failure = TrajectoryFailure{index, raw.id, e.what()};
  }
  return out;
}

DatasetCompression finalize_dataset(std::vector<TrajectoryOutcome>&& outcomes,
                                    const CompressionConfig& cfg) {
  DatasetCompression out;
  DeviationAccumulator deviations;
  std::uint64_t raw_points = 0;
  std::uint64_t retained_points = 0;
  for (auto& o : outcomes) {
    if (o.failure) {
      out.failures.push_back(std::move(*o.failure));
      continue;
    }
    deviations.merge(o.deviations);
    raw_points += o.compressed.original_point_count();
    retained_points += o.compressed.retained.size();
    out.dataset.trajectories.push_back(std::move(o.compressed));
  }
  out.stats = make_stats(raw_points, retained_points, deviations);
  out.dataset.header.epsilon = cfg.epsilon;
  out.dataset.header.sigma = out.stats.psed_std_dev;
  out.dataset.header.trajectory_count = out.dataset.trajectories.size();
  out.dataset.header.raw_point_count = raw_points;
  out.dataset.header.retained_point_count = retained_points;
  return out;
}

DatasetCompression compress_dataset(const std::vector<RawTrajectory>& raw,
                                    const CompressionConfig& cfg) {
  cfg.validate();
  std::vector<TrajectoryOutcome> outcomes;
  outcomes.reserve(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t)
    outcomes.push_back(compress_with_deviations(raw[t], cfg, t));
  return finalize_dataset(std::move(outcomes), cfg);
}

double epsilon_for_rate(const std::vector<RawTrajectory>& raw, double target_rate, int iterations) {
  if (!(target_rate >= 1.0)) throw ConfigurationError("target compression rate must be >= 1");
  const Rect b = dataset_bounds(raw);
  if (!b.valid()) throw ConfigurationError("cannot calibrate epsilon on an empty dataset");
  auto rate_at = [&](double eps) {
    std::uint64_t n_raw = 0;
    std::uint64_t n_kept = 0;
    for (const auto& t : raw) {
      n_raw += t.points.size();
      n_kept += roce_retained_indices(t.points, eps).size();
    }
    return static_cast<double>(n_raw) / static_cast<double>(n_kept);
  };
  double lo = 1e-9 * std::max({b.width(), b.height(), 1.0});
  double hi = 2.0 * std::max({b.width(), b.height(), 1.0});
  for (int it = 0; it < iterations; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (rate_at(mid) < target_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(rate_at(lo) - target_rate) <= std::abs(rate_at(hi) - target_rate) ? lo : hi;
}

}  // namespace trajcomp
