#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/graph.hpp"
#include "netclust/link_prob.hpp"
#include "netclust/linalg.hpp"

namespace netclust {

enum class Estimator { usvt, nbs, naive };

inline std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::usvt: return "usvt";
    case Estimator::nbs: return "nbs";
    case Estimator::naive: return "naive";
  }
  return "?";
}

inline Estimator estimator_from_string(const std::string& s) {
  if (s == "usvt") return Estimator::usvt;
  if (s == "nbs") return Estimator::nbs;
  if (s == "naive") return Estimator::naive;
  throw InputError("unknown estimator '" + s + "'");
}

struct EstimatorParams {
  double usvt_eta = 0.01;  // threshold slack: keep |lambda| >= (2 + eta) sqrt(n rho_hat)
  double nbs_c0 = 1.0;     // neighborhood quantile h = c0 sqrt(log n / n)
};

namespace detail {

inline Matrix clip_probabilities(Matrix p) {
  p = p.cwiseMax(0.0).cwiseMin(1.0);
  p.diagonal().setZero();
  return p;
}

}  // namespace detail

struct UsvtEstimate {
  LinkProbMatrix probabilities;
  Eigen::Index rank = 0;  // retained eigenpairs
  double threshold = 0.0;
};

// Universal singular value thresholding. For symmetric A the singular
// values are |lambda|, so one symmetric eigendecomposition suffices.
inline UsvtEstimate estimate_usvt_detailed(const Graph& g, double eta = 0.01) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n < 2) throw InputError("estimate_usvt: need n >= 2");
  UsvtEstimate out;
  if (g.edge_count() == 0) {
    out.probabilities = LinkProbMatrix(Matrix::Zero(n, n));
    return out;
  }
  const double density = 2.0 * static_cast<double>(g.edge_count()) / (static_cast<double>(n) * (n - 1));
  out.threshold = (2.0 + eta) * std::sqrt(static_cast<double>(n) * density);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(adjacency_matrix(g).values());
  if (solver.info() != Eigen::Success) throw NumericError("estimate_usvt: eigensolver failed");
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (std::abs(lambda) >= out.threshold) {
      const auto v = solver.eigenvectors().col(i);
      p.noalias() += lambda * v * v.transpose();
      ++out.rank;
    }
  }
  out.probabilities = LinkProbMatrix(detail::clip_probabilities(std::move(p)));
  return out;
}

inline LinkProbMatrix estimate_usvt(const Graph& g, double eta = 0.01) {
  return estimate_usvt_detailed(g, eta).probabilities;
}

// Row dissimilarity used by neighborhood smoothing:
// d(i, j) = max_{k != i, j} |(A^2)_ik - (A^2)_jk| / n.
inline Matrix nbs_dissimilarity(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const Matrix a = adjacency_matrix(g).values();
  const Matrix d2 = (a * a) / static_cast<double>(n);
  Matrix dis = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ci = d2.col(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto cj = d2.col(j);
      double best = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        best = std::max(best, std::abs(ci(k) - cj(k)));
      }
      dis(i, j) = best;
      dis(j, i) = best;
    }
  }
  return dis;
}

// Neighborhood smoothing. N_i holds the nodes j != i whose dissimilarity to
// i is at most the nearest-rank h-quantile of {d(i, k)}_{k != i}; the
// estimate averages adjacency rows over N_i and is then symmetrized.
inline LinkProbMatrix estimate_nbs(const Graph& g, double c0 = 1.0) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n < 3) throw InputError("estimate_nbs: need n >= 3");
  if (!(c0 > 0.0)) throw InputError("estimate_nbs: c0 must be positive");
  if (g.edge_count() == 0) return LinkProbMatrix(Matrix::Zero(n, n));

  const Matrix dis = nbs_dissimilarity(g);
  const double h = c0 * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
  const auto others = static_cast<std::size_t>(n - 1);
  const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(h * static_cast<double>(others))), 1, others);

  Matrix smoothed = Matrix::Zero(n, n);
  std::vector<double> row;
  row.reserve(others);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != i) row.push_back(dis(i, k));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(rank - 1), row.end());
    const double cutoff = row[rank - 1];
    std::size_t members = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || dis(i, j) > cutoff) continue;
      ++members;
      for (NodeId w : g.neighbors(static_cast<NodeId>(j))) smoothed(i, w) += 1.0;
    }
    smoothed.row(i) /= static_cast<double>(members);
  }
  Matrix sym = (smoothed + smoothed.transpose()) / 2.0;
  return LinkProbMatrix(detail::clip_probabilities(std::move(sym)));
}

// The adjacency matrix itself as a 0/1 estimate.
inline LinkProbMatrix estimate_naive(const Graph& g) { return LinkProbMatrix(adjacency_matrix(g).values()); }

inline LinkProbMatrix estimate(const Graph& g, Estimator which, const EstimatorParams& params = {}) {
  switch (which) {
    case Estimator::usvt: return estimate_usvt(g, params.usvt_eta);
    case Estimator::nbs: return estimate_nbs(g, params.nbs_c0);
    case Estimator::naive: return estimate_naive(g);
  }
  throw InputError("unknown estimator");
}

}  // namespace netclust
