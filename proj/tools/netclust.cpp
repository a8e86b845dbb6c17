// netclust: cluster collections of networks from the command line.
//
//   netclust simulate --config cfg.json --out dir
//   netclust cluster  manifest.csv --method nclm --K 4 --J 5 --out dir
//   netclust tune     manifest.csv --K 4 --J-max 8
//   netclust run      --config cfg.json --out dir
//   netclust report   run1 run2 ... [--out dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netclust.hpp"

namespace fs = std::filesystem;
using namespace netclust;

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !(v > 0.0)) throw InputError("--t-grid: bad value '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw InputError("--t-grid: empty list");
  return grid;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

std::string truth_name(const ExperimentConfig& cfg, int label) {
  return (cfg.scenario == "theta-suite" ? "theta" : "component") + std::to_string(label);
}

void write_cell(const ExperimentConfig& cfg, const SimulatedCell& cell, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (std::size_t t = 0; t < cell.graphs.size(); ++t) {
    std::ostringstream name;
    name << 'g' << std::setw(3) << std::setfill('0') << t << ".edges";
    save_edge_list(cell.graphs[t], (dir / name.str()).string());
    entries.push_back({name.str(), truth_name(cfg, cell.truth[t])});
  }
  write_manifest((dir / "manifest.csv").string(), entries);
}

int cmd_simulate(const SimulateArgs& a) {
  const auto cfg = ExperimentConfig::load(a.config);
  const auto seed = a.seed.value_or(cfg.seeds.front());
  const auto cells = simulate_cells(cfg, seed);
  if (cells.size() == 1) {
    write_cell(cfg, cells[0], a.out);
    std::cout << cells[0].graphs.size() << " graphs written to " << a.out << '\n';
    return 0;
  }
  for (const auto& cell : cells) {
    write_cell(cfg, cell, fs::path(a.out) / cell.label);
    std::cout << cell.label << ": " << cell.graphs.size() << " graphs written to "
              << (fs::path(a.out) / cell.label).string() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
  std::string manifest;
  std::string method = "nclm";
  int k = 2;
  int j = 5;
  std::string t_grid;
  std::uint64_t seed = 1;
  bool cache = false;
  bool no_cache = false;
  std::string cache_dir;
  unsigned jobs = 1;
  std::string out = "netclust-out";
  double usvt_eta = 0.01;
  double nbs_c0 = 1.0;
  int restarts = 20;
  double floor = kDefaultMomentFloor;
};

std::optional<ResultCache> open_cache(bool cache, bool no_cache, const std::string& dir) {
  if (no_cache) return std::nullopt;
  if (!dir.empty()) return ResultCache(dir);
  auto env = ResultCache::from_environment();
  if (env || !cache) return env;
  return ResultCache(fs::path(".netclust-cache"));
}

std::vector<FeatureVector> cached_features(const GraphCollection& c, const ClusterArgs& a,
                                           const std::optional<ResultCache>& cache, std::size_t& hits) {
  const auto method = feature_method_from_string(a.method);
  std::vector<FeatureVector> out(c.graphs.size());
  std::vector<std::uint64_t> hashes(c.graphs.size(), 0);
  std::vector<char> hit(c.graphs.size(), 0);
  const std::string params = method == FeatureMethod::graphstats ? "v1" : "J=" + std::to_string(a.j);
  const std::string key = method == FeatureMethod::nclm ? "moments" : a.method;
  if (cache) {
    for (std::size_t i = 0; i < c.graphs.size(); ++i) {
      hashes[i] = file_content_hash(c.paths[i]);
      auto v = cache->get_values(hashes[i], key, params);
      if (!v) continue;
      if (method == FeatureMethod::nclm && v->size() == static_cast<std::size_t>(a.j - 1)) {
        out[i] = log_moment_features(MomentVector(a.j, c.graphs[i].node_count(), *v), a.j, a.floor);
        hit[i] = 1;
      } else if (method == FeatureMethod::topeig && v->size() == static_cast<std::size_t>(a.j)) {
        out[i] = FeatureVector{method, *v, a.j, false};
        hit[i] = 1;
      } else if (method == FeatureMethod::graphstats && v->size() == kGraphStatCount + 1) {
        const bool flagged = v->back() != 0.0;
        v->pop_back();
        out[i] = FeatureVector{method, *v, kGraphStatCount, flagged};
        hit[i] = 1;
      }
    }
  }
  parallel_for(c.graphs.size(), a.jobs, [&](std::size_t i) {
    if (hit[i]) return;
    const Graph& g = c.graphs[i];
    switch (method) {
      case FeatureMethod::nclm: {
        const auto m = graph_moments(g, a.j);
        if (cache) cache->put_values(hashes[i], key, params, m.values());
        out[i] = log_moment_features(m, a.j, a.floor);
        break;
      }
      case FeatureMethod::topeig:
        out[i] = topeig_features(g, a.j);
        if (cache) cache->put_values(hashes[i], key, params, out[i].values);
        break;
      case FeatureMethod::graphstats: {
        out[i] = graph_stats_features(g);
        if (cache) {
          auto v = out[i].values;
          v.push_back(out[i].flagged ? 1.0 : 0.0);
          cache->put_values(hashes[i], key, params, v);
        }
        break;
      }
    }
  });
  for (char h : hit) hits += static_cast<std::size_t>(h);
  return out;
}

std::vector<LinkProbMatrix> cached_estimates(const GraphCollection& c, Estimator which, const ClusterArgs& a,
                                             const std::optional<ResultCache>& cache, std::size_t& hits) {
  EstimatorParams params{a.usvt_eta, a.nbs_c0};
  std::ostringstream key;
  key << std::hexfloat << "eta=" << params.usvt_eta << ",c0=" << params.nbs_c0;
  std::vector<LinkProbMatrix> out(c.graphs.size());
  std::vector<std::uint64_t> hashes(c.graphs.size(), 0);
  std::vector<char> hit(c.graphs.size(), 0);
  if (cache) {
    for (std::size_t i = 0; i < c.graphs.size(); ++i) {
      hashes[i] = file_content_hash(c.paths[i]);
      if (auto p = cache->get_lpm(hashes[i], to_string(which), key.str())) {
        if (p->order() == static_cast<Eigen::Index>(c.graphs[i].node_count())) {
          out[i] = std::move(*p);
          hit[i] = 1;
        }
      }
    }
  }
  parallel_for(c.graphs.size(), a.jobs, [&](std::size_t i) {
    if (hit[i]) return;
    out[i] = estimate(c.graphs[i], which, params);
    if (cache) cache->put_lpm(hashes[i], to_string(which), key.str(), out[i]);
  });
  for (char h : hit) hits += static_cast<std::size_t>(h);
  return out;
}

void report_error(const GraphCollection& c, const ClusterAssignment& a) {
  if (!c.labels) return;
  std::cout << "error: " << std::fixed << std::setprecision(4)
            << clustering_error(a.labels, *c.labels, std::max(a.k, c.label_count())) << '\n';
}

int cmd_cluster(const ClusterArgs& a) {
  Stopwatch clock;
  const auto c = load_collection(a.manifest, a.jobs);
  std::cerr << "loaded " << c.graphs.size() << " graphs in " << clock.lap() << " s\n";
  if (c.self_loops_dropped + c.duplicates_dropped > 0) {
    std::cerr << "warning: dropped " << c.self_loops_dropped << " self-loops and " << c.duplicates_dropped
              << " duplicate edges\n";
  }
  const auto cache = open_cache(a.cache, a.no_cache, a.cache_dir);
  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);
  std::size_t hits = 0;
  KMeansOptions km;
  km.restarts = a.restarts;

  ClusterAssignment assignment;
  if (a.method.rfind("ncge-", 0) == 0) {
    const auto which = estimator_from_string(a.method.substr(5));
    require_node_correspondence(c.graphs);
    if (c.graphs.size() < 2) throw InputError("ncge: need at least two graphs");
    const auto estimates = cached_estimates(c, which, a, cache, hits);
    std::cerr << "estimate: " << clock.lap() << " s\n";
    const auto distances = frobenius_distance_matrix(estimates, a.jobs);
    std::cerr << "distance: " << clock.lap() << " s\n";
    SpectralOptions opt;
    opt.kmeans = km;
    assignment = spectral_cluster_distance(distances, a.k, a.seed, opt);
    assignment.method = a.method;
    std::cerr << "cluster: " << clock.lap() << " s\n";
    auto out = open_output(out_dir / "distance.csv");
    write_matrix_csv(distances.values(), c.ids, out);
  } else {
    if (a.method != "nclm" && a.method != "topeig" && a.method != "graphstats") {
      throw InputError("unknown method '" + a.method + "'");
    }
    if (a.method == "nclm" && a.j < 2) throw InputError("--J must be >= 2 for nclm");
    const auto features = cached_features(c, a, cache, hits);
    std::cerr << "features: " << clock.lap() << " s\n";
    KernelClusterOptions opt;
    opt.kmeans = km;
    if (!a.t_grid.empty()) opt.t_grid = parse_grid(a.t_grid);
    const auto result = kernel_spectral_cluster(features, a.k, a.seed, opt);
    assignment = result.assignment;
    assignment.method = a.method;
    std::cerr << "cluster: " << clock.lap() << " s\n";
    {
      auto out = open_output(out_dir / "features.csv");
      write_features_csv(features, c.ids, out);
    }
    {
      auto out = open_output(out_dir / "distance.csv");
      write_matrix_csv(result.distances.values(), c.ids, out);
    }
    {
      auto out = open_output(out_dir / "kernel.csv");
      write_matrix_csv(result.kernel.values(), c.ids, out);
    }
    {
      auto out = open_output(out_dir / "gaps.csv");
      out << std::setprecision(17) << "t,gap\n";
      for (std::size_t i = 0; i < result.tuning.gaps.size(); ++i) {
        out << result.tuning.grid[i] << ',' << result.tuning.gaps[i] << '\n';
      }
    }
    std::cout << "t: " << std::setprecision(6) << result.tuning.t << '\n';
  }
  if (cache) std::cerr << "cache: " << hits << '/' << c.graphs.size() << " hits\n";
  {
    auto out = open_output(out_dir / "labels.csv");
    write_assignment_csv(assignment, c.ids, out);
  }
  std::cout << "method: " << assignment.method << "\nK: " << a.k << "\ngraphs: " << c.graphs.size() << '\n';
  report_error(c, assignment);
  return 0;
}

// ---------------------------------------------------------------------------

struct TuneArgs {
  std::string manifest;
  int k = 2;
  int j_min = 2;
  int j_max = 8;
  std::string t_grid;
  unsigned jobs = 1;
  std::string out;
  double floor = kDefaultMomentFloor;
};

int cmd_tune(const TuneArgs& a) {
  const auto c = load_collection(a.manifest, a.jobs);
  if (static_cast<std::size_t>(a.k) + 1 > c.graphs.size()) {
    throw InputError("tune: K+1 <= T required (K=" + std::to_string(a.k) + ", T=" +
                     std::to_string(c.graphs.size()) + ")");
  }
  std::optional<std::vector<double>> grid;
  if (!a.t_grid.empty()) grid = parse_grid(a.t_grid);
  const auto tuning = tune_J(std::span<const Graph>(c.graphs), a.k, a.j_min, a.j_max, grid, a.floor, a.jobs);
  std::cout << std::setw(4) << "J" << std::setw(16) << "t" << std::setw(16) << "gap" << '\n';
  for (const auto& p : tuning.curve) {
    std::cout << std::setw(4) << p.j << std::setw(16) << std::setprecision(6) << p.t << std::setw(16) << p.gap << '\n';
  }
  std::cout << "J*: " << tuning.j << "\nt*: " << tuning.t << '\n';
  const fs::path dir = a.out.empty() ? fs::path(".") : fs::path(a.out);
  fs::create_directories(dir);
  auto out = open_output(dir / "gaps.csv");
  out << std::setprecision(17) << "J,t,gap\n";
  for (const auto& p : tuning.curve) out << p.j << ',' << p.t << ',' << p.gap << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<unsigned> jobs;
};

int cmd_run(const RunArgs& a) {
  auto cfg = ExperimentConfig::load(a.config);
  if (a.jobs) cfg.jobs = *a.jobs;
  const auto report = run_scenario(cfg);
  write_scenario_outputs(report, a.out);
  for (const auto& cell : report.report.at("cells")) {
    for (const auto& m : cell.at("methods")) {
      std::cout << cell.at("label").get<std::string>() << "  " << std::setw(10) << m.at("method").get<std::string>()
                << "  ";
      if (m.at("mean_error").is_null()) {
        std::cout << "failed";
      } else {
        std::cout << std::fixed << std::setprecision(4) << m.at("mean_error").get<double>() << " +- "
                  << m.at("std_error").get<double>();
      }
      std::cout << '\n';
    }
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> runs;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<json> reports;
  for (const auto& run : a.runs) {
    const auto path = fs::path(run) / "report.json";
    std::ifstream in(path);
    if (!in) throw InputError("missing " + path.string());
    try {
      reports.push_back(json::parse(in));
    } catch (const json::exception& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  const auto table = compare_report(reports);
  render_text(table, std::cout);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    auto csv = open_output(fs::path(a.out) / "comparison.csv");
    render_csv(table, csv);
    auto txt = open_output(fs::path(a.out) / "comparison.txt");
    render_text(table, txt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering of network collections"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate graphs from a scenario config");
  simulate->add_option("--config", sim.config, "Scenario config (JSON)")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Seed (default: first seed of the config)");

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "Cluster the graphs listed in a manifest");
  cluster->add_option("manifest", cl.manifest, "Manifest CSV (path,label)")->required();
  cluster->add_option("--method", cl.method, "ncge-usvt|ncge-nbs|ncge-naive|nclm|topeig|graphstats")
      ->check(CLI::IsMember({"ncge-usvt", "ncge-nbs", "ncge-naive", "nclm", "topeig", "graphstats"}));
  cluster->add_option("--K", cl.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--J", cl.j, "Moment order (nclm) or eigenvalue count (topeig)");
  cluster->add_option("--t-grid", cl.t_grid, "Comma-separated kernel bandwidths");
  cluster->add_option("--seed", cl.seed, "Seed for k-means");
  cluster->add_flag("--cache", cl.cache, "Cache per-graph features and estimates");
  cluster->add_flag("--no-cache", cl.no_cache, "Bypass the cache");
  cluster->add_option("--cache-dir", cl.cache_dir, "Cache directory (default: $NETCLUST_CACHE_DIR)");
  cluster->add_option("--jobs", cl.jobs, "Worker threads (0 = all cores)");
  cluster->add_option("--out", cl.out, "Output directory");
  cluster->add_option("--usvt-eta", cl.usvt_eta, "USVT threshold slack");
  cluster->add_option("--nbs-c0", cl.nbs_c0, "NBS quantile constant");
  cluster->add_option("--restarts", cl.restarts, "k-means restarts")->check(CLI::PositiveNumber);
  cluster->add_option("--floor", cl.floor, "Moment floor before the log (nclm)")->check(CLI::PositiveNumber);

  TuneArgs tu;
  auto* tune = app.add_subcommand("tune", "Eigengap-vs-J table for log-moment features");
  tune->add_option("manifest", tu.manifest, "Manifest CSV")->required();
  tune->add_option("--K", tu.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  tune->add_option("--J-min", tu.j_min, "Smallest order");
  tune->add_option("--J-max", tu.j_max, "Largest order");
  tune->add_option("--t-grid", tu.t_grid, "Comma-separated kernel bandwidths");
  tune->add_option("--jobs", tu.jobs, "Worker threads");
  tune->add_option("--floor", tu.floor, "Moment floor before the log")->check(CLI::PositiveNumber);
  tune->add_option("--out", tu.out, "Directory for gaps.csv (default: .)");

  RunArgs ru;
  auto* run = app.add_subcommand("run", "Run a scenario and write report.json, errors.csv, gaps.csv");
  run->add_option("--config", ru.config, "Scenario config (JSON)")->required();
  run->add_option("--out", ru.out, "Output directory")->required();
  run->add_option("--jobs", ru.jobs, "Worker threads (overrides the config)");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Compare scenario runs");
  report->add_option("runs", rep.runs, "Run directories")->required();
  report->add_option("--out", rep.out, "Directory for comparison.csv / comparison.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::input);
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*cluster) return cmd_cluster(cl);
    if (*tune) return cmd_tune(tu);
    if (*run) return cmd_run(ru);
    if (*report) return cmd_report(rep);
  } catch (const Error& e) {
    std::cerr << "netclust: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "netclust: " << e.what() << '\n';
    return static_cast<int>(ExitCode::input);
  } catch (const std::exception& e) {
    std::cerr << "netclust: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numeric);
  }
  return 0;
}
