#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netclust/distance.hpp"
#include "netclust/error.hpp"
#include "netclust/features.hpp"
#include "netclust/graph.hpp"
#include "netclust/graphon.hpp"
#include "netclust/linalg.hpp"
#include "netclust/moments.hpp"
#include "netclust/parallel.hpp"

namespace netclust {

// Similarity matrix exp(-t D). Diagonal is exactly 1.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(Matrix values, double bandwidth) : m_(std::move(values)), t_(bandwidth) {}
  Eigen::Index size() const noexcept { return m_.rows(); }
  const Matrix& values() const noexcept { return m_; }
  double bandwidth() const noexcept { return t_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
  double t_ = 0.0;
};

inline KernelMatrix kernel_from_distance(const DistanceMatrix& d, double t) {
  if (!(t > 0.0)) throw InputError("kernel_from_distance: t must be positive");
  Matrix k = (-t * d.values().array()).exp().matrix();
  k.diagonal().setOnes();
  return KernelMatrix(std::move(k), t);
}

inline constexpr double kEigengapFloor = 1e-12;

// (lambda_K - lambda_{K+1}) / max(lambda_{K+1}, eps * lambda_1) with eigenvalues
// in descending algebraic order.
inline double relative_eigengap(const KernelMatrix& kernel, int k) {
  if (k < 1 || k + 1 > kernel.size()) throw InputError("relative_eigengap: K+1 <= T required");
  const Vector asc = sym_eigenvalues(SymMatrix(kernel.values()));
  const auto t = asc.size();
  const double l1 = asc(t - 1);
  const double lk = asc(t - k);
  const double lk1 = asc(t - k - 1);
  // Eigenvalues below the floor are roundoff; clamping both keeps noise from
  // registering as a gap.
  const double floor = kEigengapFloor * l1;
  return (std::max(lk, floor) - std::max(lk1, floor)) / std::max(lk1, floor);
}

// 20 log-spaced bandwidths in [1e-3 / med, 1e3 / med], med being the median
// off-diagonal distance (1 if that median is 0).
inline std::vector<double> default_t_grid(const DistanceMatrix& d, int points = 20) {
  double med = d.median_offdiagonal();
  if (!(med > 0.0)) med = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double e = -3.0 + 6.0 * i / std::max(1, points - 1);
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, e) / med;
  }
  return grid;
}

struct BandwidthTuning {
  double t = 0.0;
  double gap = 0.0;
  std::vector<double> grid;
  std::vector<double> gaps;  // one per grid point
};

// Picks the bandwidth maximizing the relative eigengap; ties go to the
// smaller t (earlier grid point after sorting).
inline BandwidthTuning tune_t(const DistanceMatrix& d, int k, std::vector<double> grid) {
  if (k < 1 || k + 1 > d.size()) {
    throw InputError("tune_t: K+1 <= T required (K=" + std::to_string(k) + ", T=" + std::to_string(d.size()) + ")");
  }
  if (grid.empty()) throw InputError("tune_t: bandwidth grid is empty");
  std::sort(grid.begin(), grid.end());
  BandwidthTuning out;
  out.grid = grid;
  for (double t : grid) out.gaps.push_back(relative_eigengap(kernel_from_distance(d, t), k));
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (out.gaps[i] > out.gaps[best]) best = i;
  }
  out.t = grid[best];
  out.gap = out.gaps[best];
  return out;
}

struct KernelClusterOptions {
  std::optional<std::vector<double>> t_grid;  // default_t_grid when empty
  int eigenvectors = 0;                       // 0 means K
  KMeansOptions kmeans;
};

struct KernelClusterResult {
  ClusterAssignment assignment;
  DistanceMatrix distances;
  KernelMatrix kernel;
  BandwidthTuning tuning;
};

// Kernel spectral clustering of feature vectors: Euclidean distances,
// bandwidth tuned by eigengap, k-means on the top eigenvectors (algebraic
// order) of exp(-t D).
inline KernelClusterResult kernel_spectral_cluster(std::span<const FeatureVector> features, int k,
                                                   std::uint64_t seed, const KernelClusterOptions& opt = {}) {
  if (k < 1) throw InputError("kernel clustering: K must be >= 1");
  if (static_cast<std::size_t>(k) > features.size()) {
    throw InputError("kernel clustering: K exceeds the number of graphs");
  }
  KernelClusterResult out;
  out.distances = feature_distance_matrix(features);
  if (static_cast<Eigen::Index>(k) + 1 <= out.distances.size()) {
    out.tuning = tune_t(out.distances, k, opt.t_grid ? *opt.t_grid : default_t_grid(out.distances));
  } else {
    // K == T: no eigengap to tune; use the middle of the default grid.
    auto grid = opt.t_grid ? *opt.t_grid : default_t_grid(out.distances);
    std::sort(grid.begin(), grid.end());
    out.tuning.grid = grid;
    out.tuning.t = grid[grid.size() / 2];
  }
  out.kernel = kernel_from_distance(out.distances, out.tuning.t);
  const int dims = opt.eigenvectors > 0 ? opt.eigenvectors : k;
  auto eig = sym_eig(SymMatrix(out.kernel.values()), std::min<Eigen::Index>(dims, out.kernel.size()),
                     EigenOrder::largest_algebraic);
  auto km = kmeans(eig.vectors, k, seed, opt.kmeans);
  out.assignment = ClusterAssignment{std::move(km.labels), k, to_string(features[0].method), std::nullopt};
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<MomentVector> moments_all(std::span<const Graph> graphs, int max_order, unsigned jobs = 1) {
  std::vector<std::optional<MomentVector>> slots(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) { slots[i] = graph_moments(graphs[i], max_order); });
  std::vector<MomentVector> out;
  out.reserve(graphs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::vector<FeatureVector> log_moment_features_all(std::span<const MomentVector> moments, int j,
                                                          double floor = kDefaultMomentFloor) {
  std::vector<FeatureVector> out;
  out.reserve(moments.size());
  for (const auto& m : moments) out.push_back(log_moment_features(m, j, floor));
  return out;
}

struct OrderTuningPoint {
  int j = 0;
  double t = 0.0;
  double gap = 0.0;
};

struct OrderTuning {
  int j = 0;
  double t = 0.0;
  std::vector<OrderTuningPoint> curve;
};

// For each J in [j_min, j_max] build log-moment features from the prefix of
// the precomputed moments, tune t, and record the eigengap. Ties go to the
// smaller J.
inline OrderTuning tune_J(std::span<const MomentVector> moments, int k, int j_min, int j_max,
                          const std::optional<std::vector<double>>& t_grid = std::nullopt,
                          double floor = kDefaultMomentFloor) {
  if (j_min < 2 || j_max < j_min) throw InputError("tune_J: need 2 <= J_min <= J_max");
  for (const auto& m : moments) {
    if (m.max_order() < j_max) throw InputError("tune_J: moments computed below J_max");
  }
  OrderTuning out;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int j = j_min; j <= j_max; ++j) {
    auto features = log_moment_features_all(moments, j, floor);
    auto d = feature_distance_matrix(features);
    auto tuning = tune_t(d, k, t_grid ? *t_grid : default_t_grid(d));
    out.curve.push_back({j, tuning.t, tuning.gap});
    if (tuning.gap > best_gap) {
      best_gap = tuning.gap;
      out.j = j;
      out.t = tuning.t;
    }
  }
  return out;
}

inline OrderTuning tune_J(std::span<const Graph> graphs, int k, int j_min, int j_max,
                          const std::optional<std::vector<double>>& t_grid = std::nullopt,
                          double floor = kDefaultMomentFloor, unsigned jobs = 1) {
  const auto moments = moments_all(graphs, j_max, jobs);
  return tune_J(std::span<const MomentVector>(moments), k, j_min, j_max, t_grid, floor);
}

struct NclmOptions {
  double floor = kDefaultMomentFloor;
  KernelClusterOptions kernel;
  unsigned jobs = 1;
};

struct NclmResult {
  KernelClusterResult clustering;
  std::vector<FeatureVector> features;
};

// Log-moment features -> Euclidean distances -> tuned kernel -> spectral
// clustering. Graphs may have different sizes.
inline NclmResult nclm_pipeline(std::span<const Graph> graphs, int j, int k, std::uint64_t seed,
                                const NclmOptions& opt = {}) {
  if (j < 2) throw InputError("nclm: J must be >= 2");
  const auto moments = moments_all(graphs, j, opt.jobs);
  NclmResult out;
  out.features = log_moment_features_all(moments, j, opt.floor);
  out.clustering = kernel_spectral_cluster(out.features, k, seed, opt.kernel);
  out.clustering.assignment.method = "nclm";
  return out;
}

// ---------------------------------------------------------------------------
// Empirical concentration of moments under a fixed link-probability matrix.

struct ConcentrationProbe {
  int order = 0;
  double mean_psi = 0.0;
  double std_psi = 0.0;
  std::vector<double> mean_log;  // per coordinate k = 2..order of g_J
  std::vector<double> std_log;
};

// Samples `reps` graphs from one realization of the latent positions (so P
// is fixed) and summarizes psi_k and the log-moment coordinates.
inline ConcentrationProbe concentration_probe(const Graphon& model, std::size_t n, int k, int reps,
                                              std::uint64_t seed, double floor = kDefaultMomentFloor,
                                              unsigned jobs = 1) {
  if (reps < 30) throw InputError("concentration_probe: need reps >= 30");
  if (k < 2) throw InputError("concentration_probe: need k >= 2");
  const auto xi = latent_positions(n, seed, 0);
  std::vector<std::optional<MomentVector>> moments(static_cast<std::size_t>(reps));
  parallel_for(moments.size(), jobs, [&](std::size_t r) {
    moments[r] = graph_moments(sample_from_latent(model, xi, seed, r), k);
  });

  // Deviations are taken from the first sample, so identical samples give an
  // exact zero spread.
  auto summarize = [reps](const std::vector<double>& xs, double& mean, double& sd) {
    const double shift = xs.front();
    double s = 0.0, ss = 0.0;
    for (double x : xs) {
      s += x - shift;
      ss += (x - shift) * (x - shift);
    }
    mean = shift + s / reps;
    sd = std::sqrt(std::max(0.0, (ss - s * s / reps) / (reps - 1)));
  };

  ConcentrationProbe out;
  out.order = k;
  std::vector<double> psi;
  for (const auto& m : moments) psi.push_back(m->psi(k));
  summarize(psi, out.mean_psi, out.std_psi);
  for (int c = 2; c <= k; ++c) {
    std::vector<double> logs;
    for (const auto& m : moments) logs.push_back(std::log(std::max(m->moment(c), floor)));
    double mean = 0.0, sd = 0.0;
    summarize(logs, mean, sd);
    out.mean_log.push_back(mean);
    out.std_log.push_back(sd);
  }
  return out;
}

}  // namespace netclust
