#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "netclust/baselines.hpp"
#include "netclust/error.hpp"
#include "netclust/estimate.hpp"
#include "netclust/graphon.hpp"
#include "netclust/metrics.hpp"
#include "netclust/ncge.hpp"
#include "netclust/nclm.hpp"

namespace netclust {

using json = nlohmann::ordered_json;

inline constexpr int kConfigSchemaVersion = 1;

struct PlantedPartition {
  double p = 0.0;
  double q = 0.0;
  int m = 1;
  double rho = 1.0;
};

// Parameters of one simulation study. Scenarios:
//   sbm-eps      two planted-partition graphons, the second scaled by (1 + eps)
//   smooth-eps   the same with a smooth graphon
//   theta-suite  planted-partition settings at several graph sizes, truth = setting
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string scenario = "sbm-eps";
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> methods;
  int k = 2;

  // sbm-eps / smooth-eps
  std::size_t n = 150;
  std::vector<std::size_t> counts{13, 7};
  std::optional<double> rho;   // explicit density multiplier ...
  double target_degree = 22.0;  // ... or calibrated to this expected mean degree
  std::vector<double> eps{0.05, 0.10, 0.15};
  PlantedPartition blockmodel{0.5, 0.1, 2, 1.0};
  SmoothKind smooth = SmoothKind::logistic_distance;

  // theta-suite
  std::vector<PlantedPartition> theta{
      {0.1, 0.05, 2, 0.6}, {0.1, 0.05, 2, 1.0}, {0.1, 0.05, 8, 0.6}, {0.2, 0.1, 8, 0.6}};
  std::vector<std::size_t> sizes{500, 1000};
  std::size_t graphs_per_size = 20;

  // method parameters
  int j = 5;
  std::optional<std::pair<int, int>> j_range;  // gap-vs-J diagnostics for nclm
  int topeig_j = 5;
  std::optional<std::vector<double>> t_grid;
  EstimatorParams estimator;
  int kmeans_restarts = 20;
  double moment_floor = kDefaultMomentFloor;
  unsigned jobs = 1;

  static const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> m{"cl-usvt", "cl-nbs", "cl-naive", "nclm", "topeig", "graphstats"};
    return m;
  }

  void validate() const {
    if (schema_version != kConfigSchemaVersion) {
      throw InputError("config: unsupported schema_version " + std::to_string(schema_version));
    }
    if (scenario != "sbm-eps" && scenario != "smooth-eps" && scenario != "theta-suite") {
      throw InputError("config: unknown scenario '" + scenario + "'");
    }
    if (seeds.empty()) throw InputError("config: need at least one seed");
    for (const auto& m : methods) {
      if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
        throw InputError("config: unknown method '" + m + "'");
      }
    }
    if (k < 1) throw InputError("config: K must be >= 1");
    if (scenario == "theta-suite") {
      if (theta.empty() || sizes.empty() || graphs_per_size == 0) throw InputError("config: empty theta suite");
      for (const auto& t : theta) {
        if (t.m < 1 || t.p < 0 || t.p > 1 || t.q < 0 || t.q > 1 || !(t.rho > 0 && t.rho <= 1)) {
          throw InputError("config: theta setting out of range");
        }
      }
      for (auto s : sizes) {
        if (s < 2) throw InputError("config: sizes must be >= 2");
      }
    } else {
      if (n < 3) throw InputError("config: n must be >= 3");
      if (counts.size() != 2) throw InputError("config: eps scenarios take two component counts");
      std::size_t total = 0;
      for (auto c : counts) total += c;
      if (total < 1) throw InputError("config: counts must sum to T >= 1");
      if (eps.empty()) throw InputError("config: eps list is empty");
      for (double e : eps) {
        if (e < 0.0) throw InputError("config: eps must be nonnegative");
      }
      if (rho && !(*rho > 0.0 && *rho <= 1.0)) throw InputError("config: rho must lie in (0, 1]");
    }
    if (j < 2 || topeig_j < 1) throw InputError("config: J must be >= 2");
    if (j_range && (j_range->first < 2 || j_range->second < j_range->first)) {
      throw InputError("config: bad J_range");
    }
    if (t_grid && t_grid->empty()) throw InputError("config: t_grid is empty");
    if (kmeans_restarts < 1) throw InputError("config: kmeans_restarts must be >= 1");
  }

  static ExperimentConfig from_json(const json& doc) {
    ExperimentConfig c;
    try {
      if (!doc.is_object()) throw InputError("config: expected a JSON object");
      if (!doc.contains("schema_version")) throw InputError("config: missing schema_version");
      c.schema_version = doc.at("schema_version").get<int>();
      c.scenario = doc.value("scenario", c.scenario);
      if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
      if (doc.contains("methods")) c.methods = doc.at("methods").get<std::vector<std::string>>();
      c.k = doc.value("K", c.k);
      c.n = doc.value("n", c.n);
      if (doc.contains("counts")) c.counts = doc.at("counts").get<std::vector<std::size_t>>();
      if (doc.contains("rho") && !doc.at("rho").is_null()) c.rho = doc.at("rho").get<double>();
      c.target_degree = doc.value("target_degree", c.target_degree);
      if (doc.contains("eps")) c.eps = doc.at("eps").get<std::vector<double>>();
      if (doc.contains("blockmodel")) {
        const auto& b = doc.at("blockmodel");
        c.blockmodel = {b.value("p", c.blockmodel.p), b.value("q", c.blockmodel.q), b.value("m", c.blockmodel.m), 1.0};
      }
      if (doc.contains("smooth")) c.smooth = smooth_kind_from_string(doc.at("smooth").get<std::string>());
      if (doc.contains("theta")) {
        c.theta.clear();
        for (const auto& t : doc.at("theta")) {
          c.theta.push_back({t.at("p").get<double>(), t.at("q").get<double>(), t.at("m").get<int>(),
                             t.value("rho", 1.0)});
        }
      }
      if (doc.contains("sizes")) c.sizes = doc.at("sizes").get<std::vector<std::size_t>>();
      c.graphs_per_size = doc.value("graphs_per_size", c.graphs_per_size);
      c.j = doc.value("J", c.j);
      if (doc.contains("J_range") && !doc.at("J_range").is_null()) {
        auto r = doc.at("J_range").get<std::vector<int>>();
        if (r.size() != 2) throw InputError("config: J_range needs two values");
        c.j_range = std::make_pair(r[0], r[1]);
      }
      c.topeig_j = doc.value("topeig_J", c.topeig_j);
      if (doc.contains("t_grid") && doc.at("t_grid").is_array()) c.t_grid = doc.at("t_grid").get<std::vector<double>>();
      c.estimator.usvt_eta = doc.value("usvt_eta", c.estimator.usvt_eta);
      c.estimator.nbs_c0 = doc.value("nbs_c0", c.estimator.nbs_c0);
      c.kmeans_restarts = doc.value("kmeans_restarts", c.kmeans_restarts);
      c.moment_floor = doc.value("moment_floor", c.moment_floor);
      c.jobs = doc.value("jobs", c.jobs);
    } catch (const json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config: " + path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError("config " + path + ": " + e.what());
    }
    return from_json(doc);
  }

  json to_json() const {
    json j_out;
    j_out["schema_version"] = schema_version;
    j_out["scenario"] = scenario;
    j_out["seeds"] = seeds;
    j_out["methods"] = methods;
    j_out["K"] = k;
    if (scenario == "theta-suite") {
      json ts = json::array();
      for (const auto& t : theta) ts.push_back({{"p", t.p}, {"q", t.q}, {"m", t.m}, {"rho", t.rho}});
      j_out["theta"] = ts;
      j_out["sizes"] = sizes;
      j_out["graphs_per_size"] = graphs_per_size;
    } else {
      j_out["n"] = n;
      j_out["counts"] = counts;
      if (rho) {
        j_out["rho"] = *rho;
      } else {
        j_out["target_degree"] = target_degree;
      }
      j_out["eps"] = eps;
      if (scenario == "sbm-eps") {
        j_out["blockmodel"] = {{"p", blockmodel.p}, {"q", blockmodel.q}, {"m", blockmodel.m}};
      } else {
        j_out["smooth"] = to_string(smooth);
      }
    }
    j_out["J"] = j;
    if (j_range) j_out["J_range"] = {j_range->first, j_range->second};
    j_out["topeig_J"] = topeig_j;
    if (t_grid) j_out["t_grid"] = *t_grid;
    j_out["usvt_eta"] = estimator.usvt_eta;
    j_out["nbs_c0"] = estimator.nbs_c0;
    j_out["kmeans_restarts"] = kmeans_restarts;
    j_out["moment_floor"] = moment_floor;
    return j_out;
  }
};

// One simulated collection with its ground truth.
struct SimulatedCell {
  std::string label;
  std::vector<Graph> graphs;
  std::vector<int> truth;
  int k = 1;
  double eps = 0.0;
};

// Two-component mixture for the eps scenarios: component 2 is component 1
// with its shape scaled by (1 + eps).
inline MixtureModel eps_mixture(const ExperimentConfig& cfg, double eps) {
  Graphon base = cfg.scenario == "sbm-eps"
                     ? Graphon::planted_partition(cfg.blockmodel.p, cfg.blockmodel.q, cfg.blockmodel.m)
                     : Graphon::smooth(SmoothFunction{cfg.smooth, 0.0, {}, 1.0});
  const double rho = cfg.rho ? *cfg.rho : rho_for_mean_degree(base, cfg.n, cfg.target_degree);
  Graphon first = base.with_rho(rho);
  Graphon second = first.scaled(1.0 + eps);
  const double total = static_cast<double>(cfg.counts[0] + cfg.counts[1]);
  return MixtureModel({first, second}, {cfg.counts[0] / total, 1.0 - cfg.counts[0] / total});
}

inline std::vector<SimulatedCell> simulate_cells(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<SimulatedCell> cells;
  if (cfg.scenario == "theta-suite") {
    SimulatedCell cell;
    cell.label = "theta-suite";
    cell.k = cfg.k;
    struct Job {
      std::size_t setting;
      std::size_t n;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < cfg.theta.size(); ++s) {
      for (auto n : cfg.sizes) {
        for (std::size_t r = 0; r < cfg.graphs_per_size; ++r) jobs.push_back({s, n});
      }
    }
    cell.graphs.resize(jobs.size());
    parallel_for(jobs.size(), cfg.jobs, [&](std::size_t t) {
      const auto& th = cfg.theta[jobs[t].setting];
      const auto g = Graphon::planted_partition(th.p, th.q, th.m, th.rho);
      // No node correspondence: every graph gets its own latent positions.
      cell.graphs[t] = sample_graphon(g, jobs[t].n, seed, t, t + 1);
    });
    for (const auto& jb : jobs) cell.truth.push_back(static_cast<int>(jb.setting) + 1);
    cells.push_back(std::move(cell));
    return cells;
  }
  for (double e : cfg.eps) {
    const auto mixture = eps_mixture(cfg, e);
    auto sampled = sample_fixed_counts(mixture, cfg.counts, cfg.n, seed, cfg.jobs);
    SimulatedCell cell;
    std::ostringstream label;
    label << "eps=" << e;
    cell.label = label.str();
    cell.k = cfg.k;
    cell.eps = e;
    for (auto& lg : sampled) {
      cell.graphs.push_back(std::move(lg.graph));
      cell.truth.push_back(lg.label);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

// ---------------------------------------------------------------------------

struct StageTimer {
  std::map<std::string, double> seconds;
  template <class F>
  auto time(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    seconds[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
};

struct GapRow {
  std::string cell;
  std::uint64_t seed;
  int j;
  double t;
  double gap;
};

struct MethodOutcome {
  std::optional<double> error;
  std::optional<std::string> failure;
  std::map<std::string, double> stage_seconds;
  std::vector<OrderTuningPoint> gap_curve;
};

inline KernelClusterOptions kernel_options(const ExperimentConfig& cfg) {
  KernelClusterOptions opt;
  opt.t_grid = cfg.t_grid;
  opt.kmeans.restarts = cfg.kmeans_restarts;
  return opt;
}

inline MethodOutcome run_method(const ExperimentConfig& cfg, const SimulatedCell& cell, const std::string& method,
                                std::uint64_t seed) {
  MethodOutcome out;
  StageTimer timer;
  try {
    std::vector<int> labels;
    if (method.rfind("cl-", 0) == 0) {
      const auto which = estimator_from_string(method.substr(3));
      require_node_correspondence(cell.graphs);
      auto estimates = timer.time("estimate", [&] { return estimate_all(cell.graphs, which, cfg.estimator, cfg.jobs); });
      auto distances = timer.time("distance", [&] { return frobenius_distance_matrix(estimates, cfg.jobs); });
      SpectralOptions opt;
      opt.kmeans.restarts = cfg.kmeans_restarts;
      labels = timer.time("cluster", [&] { return spectral_cluster_distance(distances, cell.k, seed, opt); }).labels;
    } else {
      std::vector<FeatureVector> features;
      if (method == "nclm") {
        const int j_max = std::max(cfg.j, cfg.j_range ? cfg.j_range->second : cfg.j);
        auto moments = timer.time("features", [&] { return moments_all(cell.graphs, j_max, cfg.jobs); });
        if (cfg.j_range && static_cast<std::size_t>(cell.k) + 1 <= cell.graphs.size()) {
          auto tuning = timer.time("tune", [&] {
            return tune_J(std::span<const MomentVector>(moments), cell.k, cfg.j_range->first, cfg.j_range->second,
                          cfg.t_grid, cfg.moment_floor);
          });
          out.gap_curve = tuning.curve;
        }
        features = log_moment_features_all(moments, cfg.j, cfg.moment_floor);
      } else if (method == "topeig") {
        features = timer.time("features", [&] {
          std::vector<FeatureVector> f(cell.graphs.size());
          parallel_for(f.size(), cfg.jobs, [&](std::size_t i) { f[i] = topeig_features(cell.graphs[i], cfg.topeig_j); });
          return f;
        });
      } else if (method == "graphstats") {
        features = timer.time("features", [&] {
          std::vector<FeatureVector> f(cell.graphs.size());
          parallel_for(f.size(), cfg.jobs, [&](std::size_t i) { f[i] = graph_stats_features(cell.graphs[i]); });
          return f;
        });
      } else {
        throw InputError("unknown method '" + method + "'");
      }
      auto result = timer.time("cluster", [&] { return kernel_spectral_cluster(features, cell.k, seed, kernel_options(cfg)); });
      labels = result.assignment.labels;
    }
    out.error = clustering_error(labels, cell.truth, cell.k);
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  out.stage_seconds = timer.seconds;
  return out;
}

struct ScenarioReport {
  json report;  // deterministic content
  json timing;  // wall-clock seconds, excluded from reproducibility checks
  std::vector<GapRow> gaps;

  json combined() const {
    json doc = report;
    doc["timing"] = timing;
    return doc;
  }
};

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Generates every cell for every seed, runs every configured method and
// collects per-seed clustering errors, per-stage timing and J-tuning curves.
inline ScenarioReport run_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  ScenarioReport out;
  out.report["schema_version"] = kConfigSchemaVersion;
  out.report["scenario"] = cfg.scenario;
  out.report["config"] = cfg.to_json();

  struct Accumulator {
    std::vector<std::optional<double>> errors;
    std::vector<std::string> failures;
    std::map<std::string, double> seconds;
  };
  std::vector<std::string> cell_labels;
  std::map<std::string, std::map<std::string, Accumulator>> acc;
  std::map<std::string, json> generation;

  for (auto seed : cfg.seeds) {
    auto start = std::chrono::steady_clock::now();
    const auto cells = simulate_cells(cfg, seed);
    const double gen_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& cell : cells) {
      if (std::find(cell_labels.begin(), cell_labels.end(), cell.label) == cell_labels.end()) {
        cell_labels.push_back(cell.label);
      }
      double degree = 0.0;
      for (const auto& g : cell.graphs) degree += 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
      auto& gen = generation[cell.label];
      gen["graphs"] = cell.graphs.size();
      gen["mean_degree_by_seed"].push_back(degree / static_cast<double>(cell.graphs.size()));
      auto& cell_timing = out.timing[cell.label];
      const double before = cell_timing.contains("generate") ? cell_timing["generate"].get<double>() : 0.0;
      cell_timing["generate"] = before + gen_seconds / static_cast<double>(cells.size());

      for (const auto& method : cfg.methods) {
        auto outcome = run_method(cfg, cell, method, seed);
        auto& a = acc[cell.label][method];
        a.errors.push_back(outcome.error);
        if (outcome.failure) a.failures.push_back(*outcome.failure);
        for (const auto& [stage, s] : outcome.stage_seconds) a.seconds[stage] += s;
        for (const auto& pt : outcome.gap_curve) out.gaps.push_back({cell.label, seed, pt.j, pt.t, pt.gap});
      }
    }
  }

  json cells = json::array();
  for (const auto& label : cell_labels) {
    json cell;
    cell["label"] = label;
    cell["generation"] = generation[label];
    json methods = json::array();
    for (const auto& method : cfg.methods) {
      const auto& a = acc[label][method];
      json m;
      m["method"] = method;
      json errs = json::array();
      std::vector<double> ok;
      for (const auto& e : a.errors) {
        if (e) {
          errs.push_back(*e);
          ok.push_back(*e);
        } else {
          errs.push_back(nullptr);
        }
      }
      m["errors"] = errs;
      if (!ok.empty()) {
        m["mean_error"] = mean_of(ok);
        m["std_error"] = std_of(ok);
      } else {
        m["mean_error"] = nullptr;
        m["std_error"] = nullptr;
      }
      m["failures"] = a.failures;
      methods.push_back(m);

      json t;
      double total = 0.0;
      for (const auto& [stage, s] : a.seconds) {
        t[stage] = s / static_cast<double>(cfg.seeds.size());
        total += s;
      }
      t["total"] = total / static_cast<double>(cfg.seeds.size());
      out.timing[label][method] = t;
    }
    cell["methods"] = methods;
    cells.push_back(cell);
  }
  out.report["cells"] = cells;
  return out;
}

inline void write_errors_csv(const ScenarioReport& r, std::ostream& out) {
  out << std::setprecision(17) << "cell,method,seed,error\n";
  const auto& seeds = r.report.at("config").at("seeds");
  for (const auto& cell : r.report.at("cells")) {
    for (const auto& m : cell.at("methods")) {
      for (std::size_t i = 0; i < m.at("errors").size(); ++i) {
        out << cell.at("label").get<std::string>() << ',' << m.at("method").get<std::string>() << ','
            << seeds.at(i).get<std::uint64_t>() << ',';
        if (!m.at("errors").at(i).is_null()) out << m.at("errors").at(i).get<double>();
        out << '\n';
      }
    }
  }
}

inline void write_gaps_csv(const std::vector<GapRow>& gaps, std::ostream& out) {
  out << std::setprecision(17) << "cell,seed,J,t,gap\n";
  for (const auto& g : gaps) out << g.cell << ',' << g.seed << ',' << g.j << ',' << g.t << ',' << g.gap << '\n';
}

// Writes report.json, errors.csv and gaps.csv into `dir`.
inline void write_scenario_outputs(const ScenarioReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  {
    std::ofstream out(base / "report.json");
    if (!out) throw InputError("cannot write " + (base / "report.json").string());
    out << r.combined().dump(2) << '\n';
  }
  {
    std::ofstream out(base / "errors.csv");
    write_errors_csv(r, out);
  }
  {
    std::ofstream out(base / "gaps.csv");
    write_gaps_csv(r.gaps, out);
  }
}

// ---------------------------------------------------------------------------
// Comparison tables

struct ComparisonRow {
  std::string method;  // "<method>" or "<method> @ <cell>" for multi-cell scenarios
  std::optional<double> error;
  std::optional<double> seconds;
};

struct ComparisonTable {
  std::string scenario;
  std::vector<ComparisonRow> rows;
};

// Merges reports of one scenario into a method x (error, time) table, sorted
// by error then time; rows without an error sort last.
inline ComparisonTable compare_report(const std::vector<json>& reports) {
  if (reports.empty()) throw InputError("compare_report: no reports");
  ComparisonTable table;
  try {
    table.scenario = reports.front().at("scenario").get<std::string>();
    for (const auto& r : reports) {
      if (r.at("scenario").get<std::string>() != table.scenario) {
        throw InputError("compare_report: reports come from different scenarios ('" + table.scenario + "' vs '" +
                         r.at("scenario").get<std::string>() + "')");
      }
    }
    for (const auto& r : reports) {
      const auto& cells = r.at("cells");
      for (const auto& cell : cells) {
        const auto label = cell.at("label").get<std::string>();
        for (const auto& m : cell.at("methods")) {
          ComparisonRow row;
          row.method = m.at("method").get<std::string>();
          if (cells.size() > 1) row.method += " @ " + label;
          if (m.contains("mean_error") && !m.at("mean_error").is_null()) row.error = m.at("mean_error").get<double>();
          if (r.contains("timing") && r.at("timing").contains(label) &&
              r.at("timing").at(label).contains(m.at("method").get<std::string>())) {
            row.seconds = r.at("timing").at(label).at(m.at("method").get<std::string>()).at("total").get<double>();
          }
          table.rows.push_back(std::move(row));
        }
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("compare_report: malformed report: ") + e.what());
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.error.has_value() != b.error.has_value()) return a.error.has_value();
    if (a.error && *a.error != *b.error) return *a.error < *b.error;
    if (a.seconds.has_value() != b.seconds.has_value()) return a.seconds.has_value();
    if (a.seconds && *a.seconds != *b.seconds) return *a.seconds < *b.seconds;
    return false;
  });
  return table;
}

inline constexpr const char* kMissingCell = "—";

inline std::string format_cell(const std::optional<double>& v, int precision) {
  if (!v) return kMissingCell;
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *v;
  return s.str();
}

inline void render_csv(const ComparisonTable& t, std::ostream& out) {
  out << "method,error,time_s\n";
  for (const auto& r : t.rows) out << r.method << ',' << format_cell(r.error, 4) << ',' << format_cell(r.seconds, 3) << '\n';
}

inline void render_text(const ComparisonTable& t, std::ostream& out) {
  // The missing-cell marker is one column wide but three bytes long.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::size_t name_w = std::string("method").size();
  for (const auto& r : t.rows) name_w = std::max(name_w, width(r.method));
  auto pad = [&](const std::string& s, std::size_t w, bool right) {
    const std::string fill(w > width(s) ? w - width(s) : 0, ' ');
    return right ? fill + s : s + fill;
  };
  out << "scenario: " << t.scenario << '\n';
  out << pad("method", name_w, false) << "  " << pad("error", 8, true) << "  " << pad("time (s)", 10, true) << '\n';
  for (const auto& r : t.rows) {
    out << pad(r.method, name_w, false) << "  " << pad(format_cell(r.error, 4), 8, true) << "  "
        << pad(format_cell(r.seconds, 3), 10, true) << '\n';
  }
}

}  // namespace netclust
