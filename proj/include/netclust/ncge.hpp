#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netclust/distance.hpp"
#include "netclust/error.hpp"
#include "netclust/estimate.hpp"
#include "netclust/graph.hpp"
#include "netclust/link_prob.hpp"
#include "netclust/linalg.hpp"
#include "netclust/parallel.hpp"

namespace netclust {

// Pairwise Frobenius distances ||P_i - P_j||_F. Only the upper triangle is
// computed; each entry is a fixed-order reduction, so the result does not
// depend on `jobs`.
inline DistanceMatrix frobenius_distance_matrix(std::span<const LinkProbMatrix> ps, unsigned jobs = 1) {
  const auto t = static_cast<Eigen::Index>(ps.size());
  if (t < 2) throw InputError("frobenius_distance_matrix: need at least two matrices");
  for (const auto& p : ps) {
    if (p.order() != ps[0].order()) throw InputError("frobenius_distance_matrix: dimension mismatch");
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> value(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    value[idx] = std::sqrt(ps[static_cast<std::size_t>(i)].squared_distance(ps[static_cast<std::size_t>(j)]));
  });
  Matrix d = Matrix::Zero(t, t);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) d(pairs[idx].first, pairs[idx].second) = value[idx];
  return DistanceMatrix(std::move(d));
}

struct SpectralOptions {
  KMeansOptions kmeans;
  bool normalize_rows = false;  // raw eigenvector rows by default
};

// Spectral clustering of a distance matrix: k-means on the rows of the
// T x K matrix of eigenvectors for the K largest-in-magnitude eigenvalues.
inline ClusterAssignment spectral_cluster_distance(const DistanceMatrix& d, int k, std::uint64_t seed,
                                                   const SpectralOptions& opt = {}) {
  if (k < 1) throw InputError("spectral_cluster_distance: K must be >= 1");
  if (k > d.size()) {
    throw InputError("spectral_cluster_distance: K=" + std::to_string(k) + " exceeds T=" +
                     std::to_string(d.size()));
  }
  auto eig = sym_eig(SymMatrix(d.values()), k, EigenOrder::largest_magnitude);
  if (opt.normalize_rows) {
    for (Eigen::Index i = 0; i < eig.vectors.rows(); ++i) {
      const double norm = eig.vectors.row(i).norm();
      if (norm > 0.0) eig.vectors.row(i) /= norm;
    }
  }
  auto km = kmeans(eig.vectors, k, seed, opt.kmeans);
  return ClusterAssignment{std::move(km.labels), k, "spectral-distance", std::nullopt};
}

inline std::vector<LinkProbMatrix> estimate_all(std::span<const Graph> graphs, Estimator which,
                                                const EstimatorParams& params = {}, unsigned jobs = 1) {
  std::vector<LinkProbMatrix> out(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) { out[i] = estimate(graphs[i], which, params); });
  return out;
}

inline void require_node_correspondence(std::span<const Graph> graphs) {
  for (const auto& g : graphs) {
    if (g.node_count() != graphs[0].node_count()) {
      throw PreconditionError("node correspondence required: graphs have different node counts (" +
                              std::to_string(graphs[0].node_count()) + " vs " +
                              std::to_string(g.node_count()) + ")");
    }
  }
}

struct NcgeResult {
  ClusterAssignment assignment;
  DistanceMatrix distances;
  std::vector<LinkProbMatrix> estimates;
};

// Graphon estimates -> Frobenius distance matrix -> spectral clustering.
inline NcgeResult ncge_pipeline(std::span<const Graph> graphs, Estimator which, int k, std::uint64_t seed,
                                const EstimatorParams& params = {}, const SpectralOptions& opt = {},
                                unsigned jobs = 1) {
  if (graphs.size() < 2) throw InputError("ncge: need at least two graphs");
  require_node_correspondence(graphs);
  auto estimates = estimate_all(graphs, which, params, jobs);
  auto distances = frobenius_distance_matrix(estimates, jobs);
  auto assignment = spectral_cluster_distance(distances, k, seed, opt);
  assignment.method = "ncge-" + to_string(which);
  return {std::move(assignment), std::move(distances), std::move(estimates)};
}

// ---------------------------------------------------------------------------
// Diagnostics for the eigenvector perturbation bound.

struct DavisKahanReport {
  double lhs = 0.0;    // min over orthogonal O of ||V_hat O - V||_F^2
  double rhs = 0.0;    // 16 ||D_hat - D||_F^2 / gamma^2
  double gamma = 0.0;  // K-th largest eigenvalue magnitude of D
};

inline DavisKahanReport davis_kahan_check(const DistanceMatrix& d, const DistanceMatrix& d_hat, int k) {
  if (d.size() != d_hat.size()) throw InputError("davis_kahan_check: size mismatch");
  if (k < 1 || k > d.size()) throw InputError("davis_kahan_check: need 1 <= K <= T");
  const auto pop = sym_eig(SymMatrix(d.values()), k, EigenOrder::largest_magnitude);
  const double gamma = std::abs(pop.values(k - 1));
  const double scale = d.values().norm();
  if (!(gamma > 1e-8 * scale)) {
    throw NumericError("davis_kahan_check: D is numerically rank-deficient below K (|lambda_K| = " +
                       std::to_string(gamma) + ")");
  }
  const auto est = sym_eig(SymMatrix(d_hat.values()), k, EigenOrder::largest_magnitude);
  const Matrix rotation = procrustes_rotation(est.vectors, pop.vectors);
  DavisKahanReport r;
  r.gamma = gamma;
  r.lhs = (est.vectors * rotation - pop.vectors).squaredNorm();
  r.rhs = 16.0 * (d_hat.values() - d.values()).squaredNorm() / (gamma * gamma);
  return r;
}

// Chained form through the Frobenius-consistency inequality:
// 64 T sum_i ||P_hat_i - P_i||_F^2 / gamma^2.
inline double chained_eigenvector_bound(double gamma, std::size_t t, double sum_squared_estimation_error) {
  return 64.0 * static_cast<double>(t) * sum_squared_estimation_error / (gamma * gamma);
}

// ||Pi_1 - Pi_2||_F^2 / n^2 for two planted-partition models sharing m equal blocks.
inline double blockmodel_separation_d2(double p, double q, double p2, double q2, int m) {
  if (m < 1) throw InputError("blockmodel_separation_d2: m must be >= 1");
  for (double x : {p, q, p2, q2}) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("blockmodel_separation_d2: probabilities must lie in [0, 1]");
  }
  const double inv = 1.0 / m;
  return inv * (p - p2) * (p - p2) + (1.0 - inv) * (q - q2) * (q - q2);
}

// 8 m_T ||V_hat O - V||_F^2, m_T being the largest cluster size.
inline double misclustering_bound(double eigenvector_error, std::span<const std::size_t> counts) {
  if (counts.empty()) throw InputError("misclustering_bound: no clusters");
  const auto m_t = *std::max_element(counts.begin(), counts.end());
  return 8.0 * static_cast<double>(m_t) * eigenvector_error;
}

inline double misclustering_bound(const DistanceMatrix& d, const DistanceMatrix& d_hat, int k,
                                  std::span<const std::size_t> counts) {
  return misclustering_bound(davis_kahan_check(d, d_hat, k).lhs, counts);
}

}  // namespace netclust
