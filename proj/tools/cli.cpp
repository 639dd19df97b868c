#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "trajcomp/asp_tree.hpp"
#include "trajcomp/compressor.hpp"
#include "trajcomp/errors.hpp"
#include "trajcomp/io.hpp"
#include "trajcomp/parallel.hpp"
#include "trajcomp/query.hpp"
#include "trajcomp/rng.hpp"
#include "trajcomp/synthetic.hpp"

namespace trajcomp::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Format { kTable, kCsv, kJson };

// Everything a command prints. Timings are machine-dependent and only appear
// in the human-readable table, so csv/json output is reproducible byte for byte.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, Json>> config;
  std::vector<std::pair<std::string, Json>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  std::vector<std::pair<std::string, double>> timings;
};

std::string cell(const Json& v) {
  if (v.is_number_float()) return fmt::format("{:.10g}", v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = cell(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void emit_config_comments(const Report& r, std::ostream& out) {
  out << "# command=" << r.command << '\n';
  for (const auto& [k, v] : r.config) out << "# " << k << '=' << cell(v) << '\n';
}

void emit_rows_csv(const Report& r, std::ostream& out) {
  for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
    out << '\n';
  }
}

void emit(const Report& r, Format format, std::ostream& out) {
  switch (format) {
    case Format::kTable: {
      out << "# trajcomp " << r.command << '\n';
      for (const auto& [k, v] : r.config) out << fmt::format("#   {:<18} {}\n", k, cell(v));
      for (const auto& [k, v] : r.summary) out << fmt::format("{:<22} {}\n", k, cell(v));
      for (const auto& [k, v] : r.timings) out << fmt::format("{:<22} {:.6f}\n", k, v);
      if (!r.columns.empty()) {
        out << '\n';
        for (const auto& c : r.columns) out << fmt::format("{:>14}", c);
        out << '\n';
        for (const auto& row : r.rows) {
          for (const auto& v : row) out << fmt::format("{:>14}", cell(v));
          out << '\n';
        }
      }
      break;
    }
    case Format::kCsv: {
      emit_config_comments(r, out);
      out << "metric,value\n";
      for (const auto& [k, v] : r.summary) out << k << ',' << csv_cell(v) << '\n';
      if (!r.columns.empty()) {
        out << '\n';
        emit_rows_csv(r, out);
      }
      break;
    }
    case Format::kJson: {
      Json j;
      j["command"] = r.command;
      j["config"] = Json::object();
      for (const auto& [k, v] : r.config) j["config"][k] = v;
      j["summary"] = Json::object();
      for (const auto& [k, v] : r.summary) j["summary"][k] = v;
      if (!r.columns.empty()) {
        j["rows"] = Json::array();
        for (const auto& row : r.rows) {
          Json o = Json::object();
          for (std::size_t c = 0; c < row.size(); ++c) o[r.columns[c]] = row[c];
          j["rows"].push_back(std::move(o));
        }
      }
      out << j.dump(2) << '\n';
      break;
    }
  }
}

struct GlobalOptions {
  int threads = 0;
  std::string format = "table";
};

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::kCsv;
  if (f == "json") return Format::kJson;
  return Format::kTable;
}

struct GenerateOptions {
  GeneratorSpec spec;
  std::uint64_t seed = 1;
  std::string out;
};

struct CompressOptions {
  std::string input;
  std::string output;
  double epsilon = 0.0;
  double project_lat = 0.0;
  bool project = false;
};

struct IndexOptions {
  std::string input;
  std::string output;
  std::size_t xi = 32;
};

struct QueryOptions {
  std::string index;
  std::string input;
  std::vector<double> region;
  double p = 0.5;
  std::size_t ns = 15;
  std::uint64_t seed = 1;
  bool linear = false;
};

struct EvalOptions {
  std::string raw;
  std::string input;
  std::string index;
  std::string output;
  std::size_t xi = 32;
  std::size_t queries = 1000;
  double min_area = 0.0;
  double max_area = 0.0;
  double min_area_frac = 0.0002;
  double max_area_frac = 0.0012;
  double aspect = 1.0;
  std::string mode = "probabilistic";
  double p = 0.5;
  std::size_t ns = 15;
  std::uint64_t seed = 1;
  double project_lat = 0.0;
  bool project = false;
};

Report cmd_generate(const GenerateOptions& o, const GlobalOptions& g) {
  const auto raw = generate_synthetic_parallel(o.spec, o.seed, g.threads);
  write_raw_csv(o.out, raw);
  std::uint64_t points = 0;
  for (const auto& t : raw) points += t.points.size();
  const auto& s = o.spec;
  Report r;
  r.command = "generate";
  r.config = {{"count", s.trajectory_count},   {"min_points", s.min_points},
              {"max_points", s.max_points},    {"step", s.step_mean},
              {"step_sd", s.step_sd},          {"turn_sd", s.turn_sd},
              {"zigzag_angle", s.zigzag_angle}, {"weight_smooth", s.weight_smooth},
              {"weight_zigzag", s.weight_zigzag}, {"weight_uturn", s.weight_uturn},
              {"extent", s.extent},            {"jitter", s.jitter_sd},
              {"interval", s.sample_interval}, {"seed", o.seed},
              {"out", o.out}};
  r.summary = {{"trajectories", raw.size()}, {"points", points}};
  return r;
}

Report cmd_compress(const CompressOptions& o, const GlobalOptions& g) {
  auto raw = read_raw_csv(o.input);
  if (o.project) project_equirectangular(raw, o.project_lat);
  const auto t0 = Clock::now();
  const auto result = compress_dataset_parallel(raw, CompressionConfig{o.epsilon}, g.threads);
  const double elapsed = seconds_since(t0);
  write_compressed(o.output, result.dataset);

  const auto& s = result.stats;
  Report r;
  r.command = "compress";
  r.config = {{"input", o.input}, {"output", o.output}, {"epsilon", o.epsilon}};
  if (o.project) r.config.emplace_back("project_lat", o.project_lat);
  r.summary = {{"trajectories", result.dataset.trajectories.size()},
               {"failed", result.failures.size()},
               {"raw_points", s.raw_point_count},
               {"retained_points", s.retained_point_count},
               {"compression_rate", s.compression_rate},
               {"max_psed", s.max_psed},
               {"avg_psed", s.avg_psed},
               {"sigma", s.psed_std_dev}};
  r.timings = {{"wall_seconds", elapsed},
               {"us_per_point", s.raw_point_count ? 1e6 * elapsed / static_cast<double>(s.raw_point_count) : 0.0}};
  if (!result.failures.empty()) {
    r.columns = {"index", "id", "error"};
    for (const auto& f : result.failures) r.rows.push_back({f.index, f.id, f.message});
  }
  return r;
}

Report cmd_index(const IndexOptions& o, const GlobalOptions&) {
  const auto dataset = read_compressed(o.input);
  const auto t0 = Clock::now();
  const auto tree = AspTree::build(dataset.trajectories, IndexConfig{o.xi, dataset.header.epsilon});
  const double elapsed = seconds_since(t0);
  {
    std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + o.output + "' for writing");
    tree.save(out);
  }
  const auto s = tree.stats();
  Report r;
  r.command = "index";
  r.config = {{"input", o.input}, {"output", o.output}, {"xi", o.xi},
              {"epsilon", dataset.header.epsilon}};
  r.summary = {{"nodes", s.node_count},
               {"leaves", s.leaf_count},
               {"min_leaf_height", s.min_leaf_height},
               {"max_leaf_height", s.max_leaf_height},
               {"avg_leaf_height", s.avg_leaf_height},
               {"endpoints", s.total_endpoints},
               {"max_leaf_endpoints", s.max_leaf_endpoints},
               {"leaf_runs", s.total_runs}};
  r.timings = {{"build_seconds", elapsed}};
  return r;
}

AspTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return AspTree::load(in);
}

Report cmd_query(const QueryOptions& o, const GlobalOptions&) {
  const auto dataset = read_compressed(o.input);
  const Rect region{o.region[0], o.region[1], o.region[2], o.region[3]};
  EvalSettings settings;
  settings.probability_threshold = o.p;
  settings.sampler = {dataset.header.sigma, o.ns, o.seed};
  const RangeQuery query = make_query(region, settings, 0);
  QueryOutcome outcome;
  if (o.linear) {
    outcome = rqc_linear(query, dataset);
  } else {
    if (o.index.empty()) throw ConfigurationError("--index is required unless --linear is given");
    outcome = rqc(query, dataset, load_tree(o.index));
  }

  Report r;
  r.command = "query";
  r.config = {{"input", o.input},
              {"index", o.linear ? std::string("(none)") : o.index},
              {"region", fmt::format("{},{},{},{}", format_double(region.min_x), format_double(region.min_y),
                                     format_double(region.max_x), format_double(region.max_y))},
              {"prob_threshold", o.p},
              {"ns", o.ns},
              {"sigma", dataset.header.sigma},
              {"seed", o.seed}};
  r.summary = {{"results", outcome.result().size()},
               {"accepted_mbr", outcome.accepted_by_mbr.size()},
               {"accepted_endpoints", outcome.accepted_by_endpoints.size()},
               {"accepted_probability", outcome.accepted_by_probability.size()},
               {"candidate_runs", outcome.candidate_runs},
               {"runs_after_mbr", outcome.runs_after_mbr},
               {"trajectories_sampled", outcome.trajectories_sampled}};
  r.timings = {{"filter_seconds", outcome.timings.filter_seconds},
               {"mbr_seconds", outcome.timings.mbr_seconds},
               {"endpoint_seconds", outcome.timings.endpoint_seconds},
               {"probability_seconds", outcome.timings.probability_seconds}};
  r.columns = {"trajectory", "id", "stage"};
  auto add = [&](const std::vector<TrajectoryIndex>& ids, const char* stage) {
    for (auto t : ids) r.rows.push_back({t, dataset.trajectories[t].id, stage});
  };
  add(outcome.accepted_by_mbr, "mbr");
  add(outcome.accepted_by_endpoints, "endpoints");
  add(outcome.accepted_by_probability, "probability");
  std::sort(r.rows.begin(), r.rows.end(),
            [](const auto& a, const auto& b) { return a[0].template get<std::uint32_t>() < b[0].template get<std::uint32_t>(); });
  return r;
}

Report cmd_eval(const EvalOptions& o, const GlobalOptions& g) {
  auto raw = read_raw_csv(o.raw);
  if (o.project) project_equirectangular(raw, o.project_lat);
  const auto dataset = read_compressed(o.input);
  const AspTree tree = o.index.empty()
                           ? AspTree::build(dataset.trajectories, IndexConfig{o.xi, dataset.header.epsilon})
                           : load_tree(o.index);

  const Rect bounds = dataset_bounds(raw);
  const double area = bounds.valid() ? bounds.width() * bounds.height() : 0.0;
  const double min_area = o.min_area > 0.0 ? o.min_area : o.min_area_frac * area;
  const double max_area = o.max_area > 0.0 ? o.max_area : o.max_area_frac * area;
  const auto queries = o.queries == 0 ? std::vector<Rect>{}
                                      : generate_query_batch(bounds, o.queries, min_area, max_area,
                                                             o.aspect, derive_seed(o.seed, 0x62617463ULL));
  EvalSettings settings;
  settings.mode = o.mode == "traditional" ? QueryMode::kTraditional : QueryMode::kProbabilistic;
  settings.probability_threshold = o.p;
  settings.sampler = {dataset.header.sigma, o.ns, o.seed};
  const auto t0 = Clock::now();
  const auto report = evaluate_parallel(queries, raw, dataset, tree, settings, g.threads);
  const double elapsed = seconds_since(t0);

  Report r;
  r.command = "eval";
  r.config = {{"raw", o.raw},
              {"input", o.input},
              {"index", o.index.empty() ? std::string("(built in memory)") : o.index},
              {"xi", tree.config().xi},
              {"queries", o.queries},
              {"min_area", min_area},
              {"max_area", max_area},
              {"aspect", o.aspect},
              {"mode", o.mode},
              {"prob_threshold", o.p},
              {"ns", o.ns},
              {"sigma", dataset.header.sigma},
              {"seed", o.seed}};
  r.summary = {{"queries", report.per_query.size()},
               {"evaluated", report.evaluated},
               {"avg_precision", report.avg_precision},
               {"avg_recall", report.avg_recall},
               {"avg_f1", report.avg_f1}};
  r.timings = {{"wall_seconds", elapsed}};
  r.columns = {"query",       "min_x",  "min_y", "max_x", "max_y",  "raw_hits",
               "compressed_hits", "common_hits", "precision", "recall", "f1", "skipped"};
  for (std::size_t q = 0; q < report.per_query.size(); ++q) {
    const auto& m = report.per_query[q];
    const Rect& rect = queries[q];
    r.rows.push_back({q, rect.min_x, rect.min_y, rect.max_x, rect.max_y, m.raw_hits, m.compressed_hits,
                      m.common_hits, m.precision, m.recall, m.f1, m.skipped ? 1 : 0});
  }
  if (!o.output.empty()) {
    std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + o.output + "' for writing");
    emit_config_comments(r, out);
    emit_rows_csv(r, out);
    out << fmt::format("average,,,,,,,,{},{},{},\n", cell(report.avg_precision), cell(report.avg_recall),
                       cell(report.avg_f1));
    if (!out) throw IoError("failed writing '" + o.output + "'");
  }
  return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error-bounded trajectory compression and probabilistic range queries"};
  app.name("trajcomp");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--threads", global.threads, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write synthetic raw trajectories as CSV");
  generate->add_option("--count", gen.spec.trajectory_count, "Number of trajectories");
  generate->add_option("--min-points", gen.spec.min_points);
  generate->add_option("--max-points", gen.spec.max_points);
  generate->add_option("--step", gen.spec.step_mean, "Mean step length");
  generate->add_option("--step-sd", gen.spec.step_sd);
  generate->add_option("--turn-sd", gen.spec.turn_sd, "Heading noise per step (radians)");
  generate->add_option("--zigzag-angle", gen.spec.zigzag_angle);
  generate->add_option("--weight-smooth", gen.spec.weight_smooth);
  generate->add_option("--weight-zigzag", gen.spec.weight_zigzag);
  generate->add_option("--weight-uturn", gen.spec.weight_uturn);
  generate->add_option("--extent", gen.spec.extent, "Start points uniform in [0, extent]^2");
  generate->add_option("--jitter", gen.spec.jitter_sd, "Position noise standard deviation");
  generate->add_option("--interval", gen.spec.sample_interval, "Seconds between samples");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--out,-o", gen.out, "Output CSV")->required();

  CompressOptions comp;
  auto* compress = app.add_subcommand("compress", "Compress a raw CSV dataset");
  compress->add_option("--input,-i", comp.input, "Raw CSV (id,x,y,t)")->required();
  compress->add_option("--output,-o", comp.output, "Compressed dataset (JSON lines)")->required();
  compress->add_option("--epsilon", comp.epsilon, "PSED bound")->required();
  auto* comp_proj = compress->add_option("--project-lat", comp.project_lat,
                                         "Treat x,y as lon,lat degrees and project around this latitude");

  IndexOptions idx;
  auto* index = app.add_subcommand("index", "Build the spatial index of a compressed dataset");
  index->add_option("--input,-i", idx.input, "Compressed dataset")->required();
  index->add_option("--output,-o", idx.output, "Index dump (JSON)")->required();
  index->add_option("--xi", idx.xi, "Leaf capacity in endpoints")->check(CLI::PositiveNumber);

  QueryOptions qo;
  auto* query = app.add_subcommand("query", "Run one range query");
  query->add_option("--index", qo.index, "Index dump");
  query->add_option("--input,-i", qo.input, "Compressed dataset")->required();
  query->add_option("--region", qo.region, "min_x,min_y,max_x,max_y")
      ->required()
      ->delimiter(',')
      ->expected(4);
  query->add_option("--prob-threshold", qo.p);
  query->add_option("--ns", qo.ns, "Samples per segment")->check(CLI::PositiveNumber);
  query->add_option("--seed", qo.seed);
  query->add_flag("--linear", qo.linear, "Scan every trajectory instead of using the index");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Precision/recall of range queries against raw data");
  eval->add_option("--raw", ev.raw, "Raw CSV")->required();
  eval->add_option("--input,-i", ev.input, "Compressed dataset")->required();
  eval->add_option("--index", ev.index, "Index dump (built in memory when absent)");
  eval->add_option("--xi", ev.xi, "Leaf capacity when building the index")->check(CLI::PositiveNumber);
  eval->add_option("--queries", ev.queries, "Number of random queries");
  eval->add_option("--min-area", ev.min_area, "Minimum query area (absolute)");
  eval->add_option("--max-area", ev.max_area, "Maximum query area (absolute)");
  eval->add_option("--min-area-frac", ev.min_area_frac, "Minimum area as a fraction of the bounding box");
  eval->add_option("--max-area-frac", ev.max_area_frac, "Maximum area as a fraction of the bounding box");
  eval->add_option("--aspect", ev.aspect, "Query width/height");
  eval->add_option("--mode", ev.mode)->check(CLI::IsMember({"traditional", "probabilistic"}));
  eval->add_option("--prob-threshold", ev.p);
  eval->add_option("--ns", ev.ns, "Samples per segment")->check(CLI::PositiveNumber);
  eval->add_option("--seed", ev.seed);
  eval->add_option("--output,-o", ev.output, "Per-query CSV report");
  auto* eval_proj = eval->add_option("--project-lat", ev.project_lat,
                                     "Treat raw x,y as lon,lat degrees and project around this latitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  comp.project = comp_proj->count() > 0;
  ev.project = eval_proj->count() > 0;

  try {
    Report report;
    if (*generate) {
      report = cmd_generate(gen, global);
    } else if (*compress) {
      report = cmd_compress(comp, global);
    } else if (*index) {
      report = cmd_index(idx, global);
    } else if (*query) {
      report = cmd_query(qo, global);
    } else {
      report = cmd_eval(ev, global);
    }
    emit(report, parse_format(global.format), out);
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace trajcomp::cli
