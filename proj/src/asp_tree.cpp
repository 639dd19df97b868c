#include "trajcomp/asp_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "trajcomp/errors.hpp"
#include "trajcomp/uncertainty.hpp"

namespace trajcomp {

namespace {

constexpr const char* kTreeFormat = "trajcomp-asp-tree";
constexpr int kTreeVersion = 1;

struct PlannedSplit {
  Split split;
  std::vector<std::uint8_t> masks;  ///< per segment: bit q set iff stadium meets quadrant q
};

PlannedSplit plan_way(SplitWay way, const Rect& region, const std::vector<Point2>& endpoints,
                      const std::vector<Segment2>& segments, double epsilon) {
  const bool vertical_first = way == SplitWay::kVerticalFirst;
  auto primary = [&](const Point2& p) { return vertical_first ? p.x : p.y; };
  auto secondary = [&](const Point2& p) { return vertical_first ? p.y : p.x; };
  const double p_lo = vertical_first ? region.min_x : region.min_y;
  const double p_hi = vertical_first ? region.max_x : region.max_y;
  const double s_lo = vertical_first ? region.min_y : region.min_x;
  const double s_hi = vertical_first ? region.max_y : region.max_x;

  PlannedSplit plan;
  Split& sp = plan.split;
  sp.way = way;
  std::vector<double> values;
  values.reserve(endpoints.size());
  for (const auto& p : endpoints) values.push_back(primary(p));
  sp.first_cut = lower_median(std::move(values), p_lo, p_hi);

  std::vector<double> low_side;
  std::vector<double> high_side;
  for (const auto& p : endpoints) {
    (primary(p) <= sp.first_cut ? low_side : high_side).push_back(secondary(p));
  }
  sp.second_cuts[0] = lower_median(std::move(low_side), s_lo, s_hi);
  sp.second_cuts[1] = lower_median(std::move(high_side), s_lo, s_hi);

  // Quadrants 0,1 on the low side of the first cut, 2,3 on the high side; the
  // even member of each pair is below the second cut.
  auto make = [&](double a0, double a1, double b0, double b1) {
    return vertical_first ? Rect{a0, b0, a1, b1} : Rect{b0, a0, b1, a1};
  };
  sp.quadrants[0] = make(p_lo, sp.first_cut, s_lo, sp.second_cuts[0]);
  sp.quadrants[1] = make(p_lo, sp.first_cut, sp.second_cuts[0], s_hi);
  sp.quadrants[2] = make(sp.first_cut, p_hi, s_lo, sp.second_cuts[1]);
  sp.quadrants[3] = make(sp.first_cut, p_hi, sp.second_cuts[1], s_hi);

  plan.masks.resize(segments.size(), 0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const EpsilonBoundingRegion ebr{segments[s], epsilon};
    for (std::size_t q = 0; q < 4; ++q) {
      if (ebr_intersects_rect(ebr, sp.quadrants[q])) {
        plan.masks[s] |= static_cast<std::uint8_t>(1u << q);
        ++sp.duplicated_segments;
      }
    }
  }
  return plan;
}

PlannedSplit plan_split(const Rect& region, const std::vector<Point2>& endpoints,
                        const std::vector<Segment2>& segments, double epsilon) {
  PlannedSplit a = plan_way(SplitWay::kVerticalFirst, region, endpoints, segments, epsilon);
  PlannedSplit b = plan_way(SplitWay::kHorizontalFirst, region, endpoints, segments, epsilon);
  return b.split.duplicated_segments < a.split.duplicated_segments ? std::move(b) : std::move(a);
}

struct Builder {
  const std::vector<CompressedTrajectory>& trajectories;
  const IndexConfig& cfg;
  std::vector<AspNode>& nodes;

  Segment2 segment_of(const SegmentRef& ref) const {
    return indexed_segment(trajectories[ref.trajectory], ref.segment);
  }

  std::int32_t build(const Rect& region, std::uint32_t height, std::vector<SegmentRef> refs,
                     std::vector<Point2> endpoints) {
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[index].region = region;
    nodes[index].height = height;
    nodes[index].endpoint_count = static_cast<std::uint32_t>(endpoints.size());

    const bool coincident =
        std::all_of(endpoints.begin(), endpoints.end(),
                    [&](const Point2& p) { return p == endpoints.front(); });
    if (endpoints.size() <= cfg.xi || height >= AspTree::kMaxHeight || coincident) {
      nodes[index].runs = runs_from_segments(refs);
      return index;
    }

    std::vector<Segment2> segments;
    segments.reserve(refs.size());
    for (const auto& r : refs) segments.push_back(segment_of(r));
    const PlannedSplit plan = plan_split(region, endpoints, segments, cfg.epsilon);

    std::array<std::vector<Point2>, 4> child_points;
    for (const auto& p : endpoints) child_points[plan.split.quadrant_of(p)].push_back(p);
    std::array<std::vector<SegmentRef>, 4> child_refs;
    for (std::size_t s = 0; s < refs.size(); ++s) {
      for (std::size_t q = 0; q < 4; ++q) {
        if (plan.masks[s] & (1u << q)) child_refs[q].push_back(refs[s]);
      }
    }
    refs.clear();
    refs.shrink_to_fit();
    endpoints.clear();
    endpoints.shrink_to_fit();

    std::array<std::int32_t, 4> children{};
    for (std::size_t q = 0; q < 4; ++q) {
      children[q] = build(plan.split.quadrants[q], height + 1, std::move(child_refs[q]),
                          std::move(child_points[q]));
    }
    nodes[index].children = children;
    return index;
  }
};

}  // namespace

void IndexConfig::validate() const {
  if (xi < 1) throw ConfigurationError("xi must be at least 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ConfigurationError("index epsilon must be non-negative and finite");
}

std::size_t Split::quadrant_of(const Point2& p) const {
  const bool vertical_first = way == SplitWay::kVerticalFirst;
  const double primary = vertical_first ? p.x : p.y;
  const double secondary = vertical_first ? p.y : p.x;
  if (primary <= first_cut) return secondary <= second_cuts[0] ? 0 : 1;
  return secondary <= second_cuts[1] ? 2 : 3;
}

double lower_median(std::vector<double> values, double lo, double hi) {
  if (values.empty()) return lo + (hi - lo) / 2.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

Split split_node(const Rect& region, const std::vector<Point2>& endpoints,
                 const std::vector<Segment2>& segments, double epsilon) {
  return plan_split(region, endpoints, segments, epsilon).split;
}

std::vector<SegmentRun> runs_from_segments(const std::vector<SegmentRef>& refs) {
  std::vector<SegmentRun> runs;
  for (const auto& r : refs) {
    if (!runs.empty() && runs.back().trajectory == r.trajectory &&
        runs.back().last_segment + 1 == r.segment) {
      runs.back().last_segment = r.segment;
    } else {
      runs.push_back({r.trajectory, r.segment, r.segment});
    }
  }
  return runs;
}

std::vector<SegmentRun> merge_runs(std::vector<SegmentRun> runs) {
  std::sort(runs.begin(), runs.end());
  std::vector<SegmentRun> merged;
  for (const auto& r : runs) {
    if (!merged.empty() && merged.back().trajectory == r.trajectory &&
        static_cast<std::uint64_t>(r.first_segment) <=
            static_cast<std::uint64_t>(merged.back().last_segment) + 1) {
      merged.back().last_segment = std::max(merged.back().last_segment, r.last_segment);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

AspTree AspTree::build(const std::vector<CompressedTrajectory>& trajectories,
                       const IndexConfig& cfg) {
  cfg.validate();
  AspTree tree;
  tree.config_ = cfg;
  tree.trajectory_count_ = trajectories.size();

  std::vector<SegmentRef> refs;
  std::vector<Point2> endpoints;
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    const auto& traj = trajectories[t];
    for (std::size_t k = 0; k < indexed_segment_count(traj); ++k)
      refs.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(k)});
    for (const auto& p : traj.retained) endpoints.push_back(p.position());
  }
  const Rect bounds = dataset_bounds(trajectories);
  if (!bounds.valid()) {
    tree.nodes_.emplace_back();
    return tree;
  }
  Builder builder{trajectories, tree.config_, tree.nodes_};
  builder.build(bounds.expanded(cfg.epsilon), 1, std::move(refs), std::move(endpoints));
  return tree;
}

std::vector<std::size_t> AspTree::leaves_overlapping(const Rect& r) const {
  std::vector<std::size_t> leaves;
  if (nodes_.empty()) return leaves;
  // Plain FIFO order; the result is a set, so traversal order is irrelevant.
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    const AspNode& node = nodes_[n];
    if (!rects_overlap(node.region, r)) continue;
    if (node.is_leaf()) {
      leaves.push_back(n);
    } else {
      for (auto c : node.children) queue.push_back(static_cast<std::size_t>(c));
    }
  }
  return leaves;
}

std::vector<SegmentRun> AspTree::query_leaves(const Rect& r) const {
  std::vector<SegmentRun> runs;
  for (auto leaf : leaves_overlapping(r)) {
    const auto& payload = nodes_[leaf].runs;
    runs.insert(runs.end(), payload.begin(), payload.end());
  }
  return merge_runs(std::move(runs));
}

TreeStats AspTree::stats() const {
  TreeStats s;
  s.node_count = nodes_.size();
  std::uint64_t height_sum = 0;
  s.min_leaf_height = std::numeric_limits<std::uint32_t>::max();
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) continue;
    ++s.leaf_count;
    height_sum += n.height;
    s.min_leaf_height = std::min(s.min_leaf_height, n.height);
    s.max_leaf_height = std::max(s.max_leaf_height, n.height);
    s.total_endpoints += n.endpoint_count;
    s.max_leaf_endpoints = std::max<std::size_t>(s.max_leaf_endpoints, n.endpoint_count);
    s.total_runs += n.runs.size();
  }
  if (s.leaf_count == 0) s.min_leaf_height = 0;
  s.avg_leaf_height =
      s.leaf_count == 0 ? 0.0 : static_cast<double>(height_sum) / static_cast<double>(s.leaf_count);
  return s;
}

void AspTree::save(std::ostream& out) const {
  nlohmann::json j;
  j["format"] = kTreeFormat;
  j["version"] = kTreeVersion;
  j["xi"] = config_.xi;
  j["epsilon"] = config_.epsilon;
  j["trajectory_count"] = trajectory_count_;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json jn;
    jn["region"] = {n.region.min_x, n.region.min_y, n.region.max_x, n.region.max_y};
    jn["height"] = n.height;
    jn["endpoints"] = n.endpoint_count;
    if (n.is_leaf()) {
      auto& runs = jn["runs"] = nlohmann::json::array();
      for (const auto& r : n.runs) runs.push_back({r.trajectory, r.first_segment, r.last_segment});
    } else {
      jn["children"] = n.children;
    }
    nodes.push_back(std::move(jn));
  }
  out << j.dump() << '\n';
  if (!out) throw IoError("failed to write index");
}

AspTree AspTree::load(std::istream& in) {
  AspTree tree;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format").get<std::string>() != kTreeFormat)
      throw FormatError("not an index dump");
    if (j.at("version").get<int>() != kTreeVersion)
      throw FormatError("unsupported index version " + std::to_string(j.at("version").get<int>()));
    tree.config_.xi = j.at("xi").get<std::size_t>();
    tree.config_.epsilon = j.at("epsilon").get<double>();
    tree.trajectory_count_ = j.at("trajectory_count").get<std::size_t>();
    const auto& nodes = j.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw FormatError("index has no nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& jn = nodes[i];
      AspNode n;
      const auto region = jn.at("region").get<std::array<double, 4>>();
      n.region = {region[0], region[1], region[2], region[3]};
      n.height = jn.at("height").get<std::uint32_t>();
      n.endpoint_count = jn.at("endpoints").get<std::uint32_t>();
      if (jn.contains("children")) {
        n.children = jn.at("children").get<std::array<std::int32_t, 4>>();
        for (auto c : n.children) {
          if (c <= static_cast<std::int32_t>(i) || c >= static_cast<std::int32_t>(nodes.size()))
            throw FormatError("index node " + std::to_string(i) + " has an invalid child");
        }
      } else {
        for (const auto& jr : jn.at("runs")) {
          const auto r = jr.get<std::array<std::uint32_t, 3>>();
          if (r[1] > r[2] || r[0] >= tree.trajectory_count_)
            throw FormatError("index node " + std::to_string(i) + " has an invalid run");
          n.runs.push_back({r[0], r[1], r[2]});
        }
      }
      tree.nodes_.push_back(std::move(n));
    }
    tree.config_.validate();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt index dump: ") + e.what());
  } catch (const ConfigurationError& e) {
    throw FormatError(std::string("corrupt index dump: ") + e.what());
  }
  return tree;
}

}  // namespace trajcomp
