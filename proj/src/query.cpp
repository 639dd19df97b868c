#include "trajcomp/query.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>

#include "trajcomp/errors.hpp"
#include "trajcomp/rng.hpp"

namespace trajcomp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TrajectoryRuns {
  TrajectoryIndex trajectory = 0;
  std::vector<SegmentRun> runs;
};

std::vector<TrajectoryRuns> group_by_trajectory(const std::vector<SegmentRun>& runs) {
  std::vector<TrajectoryRuns> groups;
  for (const auto& r : runs) {
    if (groups.empty() || groups.back().trajectory != r.trajectory) groups.push_back({r.trajectory, {}});
    groups.back().runs.push_back(r);
  }
  return groups;
}

// Stages 2-4, shared by the indexed and the linear query.
void verify(const RangeQuery& query, const CompressedDataset& dataset,
            const std::vector<SegmentRun>& candidates, QueryOutcome& out) {
  const double eps = dataset.header.epsilon;
  const Rect& region = query.region;
  out.candidate_runs = candidates.size();

  auto t0 = Clock::now();
  std::vector<TrajectoryRuns> undecided;
  for (auto& group : group_by_trajectory(candidates)) {
    const auto& traj = dataset.trajectories[group.trajectory];
    bool contained = false;
    std::vector<SegmentRun> surviving;
    for (const auto& run : group.runs) {
      const Rect mbr = run_mbr(traj, run, eps);
      if (!rects_overlap(mbr, region)) continue;
      if (rect_contains_rect(region, mbr)) {
        contained = true;
        break;
      }
      surviving.push_back(run);
    }
    if (contained) {
      out.accepted_by_mbr.push_back(group.trajectory);
    } else if (!surviving.empty()) {
      out.runs_after_mbr += surviving.size();
      undecided.push_back({group.trajectory, std::move(surviving)});
    }
  }
  out.timings.mbr_seconds = seconds_since(t0);

  t0 = Clock::now();
  std::vector<TrajectoryRuns> sampled;
  for (auto& group : undecided) {
    const auto& traj = dataset.trajectories[group.trajectory];
    bool hit = false;
    for (const auto& run : group.runs) {
      const std::size_t last_point = std::min<std::size_t>(run.last_segment + 1, traj.retained.size() - 1);
      for (std::size_t k = run.first_segment; k <= last_point && !hit; ++k)
        hit = rect_contains(region, traj.retained[k].position());
      if (hit) break;
    }
    if (hit) {
      out.accepted_by_endpoints.push_back(group.trajectory);
    } else {
      sampled.push_back(std::move(group));
    }
  }
  out.timings.endpoint_seconds = seconds_since(t0);

  t0 = Clock::now();
  out.trajectories_sampled = sampled.size();
  std::vector<std::uint32_t> segments;
  for (const auto& group : sampled) {
    segments.clear();
    for (const auto& run : group.runs)
      for (std::uint32_t k = run.first_segment; k <= run.last_segment; ++k) segments.push_back(k);
    const double p = trajectory_probability(dataset.trajectories[group.trajectory], group.trajectory,
                                            segments, query, eps);
    if (p > query.probability_threshold) out.accepted_by_probability.push_back(group.trajectory);
  }
  out.timings.probability_seconds = seconds_since(t0);
}

}  // namespace

void RangeQuery::validate() const {
  if (!region.valid()) throw ConfigurationError("query region must satisfy min <= max");
  if (!(probability_threshold >= 0.0 && probability_threshold < 1.0))
    throw ConfigurationError("probability threshold must lie in [0, 1)");
  sampler.validate();
}

std::vector<TrajectoryIndex> QueryOutcome::result() const {
  std::vector<TrajectoryIndex> all;
  all.reserve(accepted_by_mbr.size() + accepted_by_endpoints.size() + accepted_by_probability.size());
  all.insert(all.end(), accepted_by_mbr.begin(), accepted_by_mbr.end());
  all.insert(all.end(), accepted_by_endpoints.begin(), accepted_by_endpoints.end());
  all.insert(all.end(), accepted_by_probability.begin(), accepted_by_probability.end());
  std::sort(all.begin(), all.end());
  return all;
}

Rect run_mbr(const CompressedTrajectory& traj, const SegmentRun& run, double epsilon) {
  Rect mbr = bounding_rect(indexed_segment(traj, run.first_segment));
  for (std::size_t k = run.first_segment + 1; k <= run.last_segment; ++k) {
    const Rect b = bounding_rect(indexed_segment(traj, k));
    mbr.min_x = std::min(mbr.min_x, b.min_x);
    mbr.min_y = std::min(mbr.min_y, b.min_y);
    mbr.max_x = std::max(mbr.max_x, b.max_x);
    mbr.max_y = std::max(mbr.max_y, b.max_y);
  }
  return mbr.expanded(epsilon);
}

std::uint64_t segment_seed(std::uint64_t query_seed, TrajectoryIndex trajectory,
                           std::size_t segment) {
  return derive_seed(query_seed, trajectory, segment);
}

double trajectory_probability(const CompressedTrajectory& traj, TrajectoryIndex index,
                              const std::vector<std::uint32_t>& segments, const RangeQuery& query,
                              double epsilon) {
  double miss = 1.0;
  for (auto k : segments) {
    const Segment2 seg = indexed_segment(traj, k);
    if (!ebr_intersects_rect({seg, epsilon}, query.region)) continue;
    SamplerConfig cfg = query.sampler;
    cfg.seed = segment_seed(query.sampler.seed, index, k);
    miss *= 1.0 - estimate_segment_probability(seg, query.region, epsilon,
                                               indexed_discarded_count(traj, k), cfg);
  }
  return 1.0 - miss;
}

QueryOutcome rqc(const RangeQuery& query, const CompressedDataset& dataset, const AspTree& tree) {
  query.validate();
  if (tree.trajectory_count() != dataset.trajectories.size())
    throw ConfigurationError("index was built for a dataset of " +
                             std::to_string(tree.trajectory_count()) + " trajectories, got " +
                             std::to_string(dataset.trajectories.size()));
  if (tree.config().epsilon != dataset.header.epsilon)
    throw ConfigurationError("index epsilon does not match the dataset epsilon");
  QueryOutcome out;
  const auto t0 = Clock::now();
  const auto candidates = tree.query_leaves(query.region);
  out.timings.filter_seconds = seconds_since(t0);
  verify(query, dataset, candidates, out);
  return out;
}

QueryOutcome rqc_linear(const RangeQuery& query, const CompressedDataset& dataset) {
  query.validate();
  std::vector<SegmentRun> all;
  all.reserve(dataset.trajectories.size());
  for (std::size_t t = 0; t < dataset.trajectories.size(); ++t) {
    const std::size_t n = indexed_segment_count(dataset.trajectories[t]);
    if (n == 0) continue;
    all.push_back({static_cast<std::uint32_t>(t), 0, static_cast<std::uint32_t>(n - 1)});
  }
  QueryOutcome out;
  verify(query, dataset, all, out);
  return out;
}

std::vector<TrajectoryIndex> query_raw(const Rect& region, const std::vector<RawTrajectory>& raw) {
  std::vector<TrajectoryIndex> ids;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const auto& pts = raw[t].points;
    if (std::any_of(pts.begin(), pts.end(),
                    [&](const TrajectoryPoint& p) { return rect_contains(region, p.position()); }))
      ids.push_back(static_cast<TrajectoryIndex>(t));
  }
  return ids;
}

std::vector<TrajectoryIndex> query_compressed_traditional(const Rect& region,
                                                          const CompressedDataset& dataset) {
  std::vector<TrajectoryIndex> ids;
  for (std::size_t t = 0; t < dataset.trajectories.size(); ++t) {
    const auto& pts = dataset.trajectories[t].retained;
    if (std::any_of(pts.begin(), pts.end(),
                    [&](const TrajectoryPoint& p) { return rect_contains(region, p.position()); }))
      ids.push_back(static_cast<TrajectoryIndex>(t));
  }
  return ids;
}

QueryMetrics score_query(const std::vector<TrajectoryIndex>& raw_result,
                         const std::vector<TrajectoryIndex>& compressed_result) {
  QueryMetrics m;
  m.raw_hits = raw_result.size();
  m.compressed_hits = compressed_result.size();
  std::vector<TrajectoryIndex> common;
  std::set_intersection(raw_result.begin(), raw_result.end(), compressed_result.begin(),
                        compressed_result.end(), std::back_inserter(common));
  m.common_hits = common.size();
  if (m.raw_hits == 0 && m.compressed_hits == 0) {
    m.skipped = true;
    return m;
  }
  if (m.raw_hits == 0 || m.compressed_hits == 0) return m;
  m.precision = static_cast<double>(m.common_hits) / static_cast<double>(m.compressed_hits);
  m.recall = static_cast<double>(m.common_hits) / static_cast<double>(m.raw_hits);
  if (m.precision > 0.0 && m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

EvalReport summarize(std::vector<QueryMetrics> per_query) {
  EvalReport report;
  report.per_query = std::move(per_query);
  for (const auto& m : report.per_query) {
    if (m.skipped) continue;
    ++report.evaluated;
    report.avg_precision += m.precision;
    report.avg_recall += m.recall;
    report.avg_f1 += m.f1;
  }
  if (report.evaluated > 0) {
    const double n = static_cast<double>(report.evaluated);
    report.avg_precision /= n;
    report.avg_recall /= n;
    report.avg_f1 /= n;
  }
  return report;
}

std::uint64_t query_seed(std::uint64_t batch_seed, std::size_t index) {
  return derive_seed(batch_seed, 0x71756572ULL, index);
}

RangeQuery make_query(const Rect& region, const EvalSettings& settings, std::size_t index) {
  RangeQuery q;
  q.region = region;
  q.probability_threshold = settings.probability_threshold;
  q.sampler = settings.sampler;
  q.sampler.seed = query_seed(settings.sampler.seed, index);
  return q;
}

std::vector<TrajectoryIndex> answer_query(const Rect& region, const CompressedDataset& dataset,
                                          const AspTree& tree, const EvalSettings& settings,
                                          std::size_t index) {
  if (settings.mode == QueryMode::kTraditional) return query_compressed_traditional(region, dataset);
  return rqc(make_query(region, settings, index), dataset, tree).result();
}

void check_correspondence(const std::vector<RawTrajectory>& raw, const CompressedDataset& dataset) {
  if (raw.size() != dataset.trajectories.size())
    throw MismatchError("raw dataset has " + std::to_string(raw.size()) +
                        " trajectories, compressed dataset has " +
                        std::to_string(dataset.trajectories.size()));
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t].id != dataset.trajectories[t].id)
      throw MismatchError("trajectory " + std::to_string(t) + ": raw id '" + raw[t].id +
                          "' does not match compressed id '" + dataset.trajectories[t].id + "'");
  }
}

EvalReport evaluate(const std::vector<Rect>& queries, const std::vector<RawTrajectory>& raw,
                    const CompressedDataset& dataset, const AspTree& tree,
                    const EvalSettings& settings) {
  check_correspondence(raw, dataset);
  std::vector<QueryMetrics> metrics;
  metrics.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    metrics.push_back(score_query(query_raw(queries[q], raw),
                                  answer_query(queries[q], dataset, tree, settings, q)));
  }
  return summarize(std::move(metrics));
}

std::vector<Rect> generate_query_batch(const Rect& bounds, std::size_t count, double min_area,
                                       double max_area, double aspect, std::uint64_t seed) {
  if (!(min_area > 0.0) || !(max_area >= min_area) || !(aspect > 0.0))
    throw ConfigurationError("query areas must satisfy 0 < min <= max and aspect > 0");
  if (count > 0 && !bounds.valid()) throw ConfigurationError("cannot place queries in empty bounds");
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Rect> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double cx = bounds.min_x + unit(rng) * bounds.width();
    const double cy = bounds.min_y + unit(rng) * bounds.height();
    const double area = min_area + unit(rng) * (max_area - min_area);
    const double w = std::sqrt(area * aspect);
    const double h = area / w;
    out.push_back({cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0});
  }
  return out;
}

}  // namespace trajcomp
