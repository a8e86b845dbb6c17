#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/graph.hpp"
#include "netclust/random.hpp"

namespace netclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric matrix. The upper triangle of the input is authoritative
// and is mirrored on construction, so symmetry is exact.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InputError("SymMatrix: matrix is not square");
    m_.triangularView<Eigen::StrictlyLower>() = m_.transpose();
  }
  Eigen::Index order() const noexcept { return m_.rows(); }
  const Matrix& values() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  bool all_finite() const { return m_.allFinite(); }

 private:
  Matrix m_;
};

enum class EigenOrder { largest_magnitude, largest_algebraic, smallest_algebraic };

struct SpectralPair {
  Vector values;   // k eigenvalues in the requested order
  Matrix vectors;  // n x k, orthonormal columns
};

namespace detail {

// Flips v so its largest-magnitude entry is positive (first such index on ties).
inline void canonical_sign(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= top * (1.0 - 1e-9)) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

inline std::vector<Eigen::Index> eigen_order(const Vector& ascending, EigenOrder order) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ascending.size()));
  std::iota(idx.begin(), idx.end(), 0);
  switch (order) {
    case EigenOrder::smallest_algebraic:
      break;
    case EigenOrder::largest_algebraic:
      std::reverse(idx.begin(), idx.end());
      break;
    case EigenOrder::largest_magnitude:
      // Descending magnitude. Magnitudes equal up to roundoff (1e-10 of the
      // spectral radius) count as ties, and ties put the positive value first.
      std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(ascending(a)) > std::abs(ascending(b));
      });
      if (!idx.empty()) {
        const double tol = 1e-10 * std::abs(ascending(idx.front()));
        for (std::size_t lo = 0; lo < idx.size();) {
          std::size_t hi = lo + 1;
          while (hi < idx.size() && std::abs(ascending(idx[lo])) - std::abs(ascending(idx[hi])) <= tol) ++hi;
          std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(hi),
                           [&](Eigen::Index a, Eigen::Index b) { return ascending(a) > ascending(b); });
          lo = hi;
        }
      }
      break;
  }
  return idx;
}

}  // namespace detail

// Full eigenvalue list in ascending order.
inline Vector sym_eigenvalues(const SymMatrix& s) {
  if (!s.all_finite()) throw NumericError("sym_eig: matrix has non-finite entries");
  if (s.order() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.values(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("sym_eig: solver did not converge");
  return solver.eigenvalues();
}

// k eigenpairs of a symmetric matrix selected by `order`. A full dense
// decomposition is computed and truncated afterwards.
inline SpectralPair sym_eig(const SymMatrix& s, Eigen::Index k,
                            EigenOrder order = EigenOrder::largest_magnitude) {
  const Eigen::Index n = s.order();
  if (k < 1 || k > n) {
    throw InputError("sym_eig: need 1 <= k <= n (k=" + std::to_string(k) +
                     ", n=" + std::to_string(n) + ")");
  }
  if (!s.all_finite()) throw NumericError("sym_eig: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.values());
  if (solver.info() != Eigen::Success) throw NumericError("sym_eig: solver did not converge");
  const auto idx = detail::eigen_order(solver.eigenvalues(), order);
  SpectralPair out{Vector(k), Matrix(n, k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto src = idx[static_cast<std::size_t>(j)];
    out.values(j) = solver.eigenvalues()(src);
    out.vectors.col(j) = solver.eigenvectors().col(src);
    detail::canonical_sign(out.vectors.col(j));
  }
  return out;
}

inline SymMatrix adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Matrix a = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return SymMatrix(std::move(a));
}

// Orthogonal O minimizing ||from * O - to||_F (orthogonal Procrustes): the
// polar factor of from^T to.
inline Matrix procrustes_rotation(const Matrix& from, const Matrix& to) {
  if (from.rows() != to.rows() || from.cols() != to.cols()) {
    throw InputError("procrustes_rotation: shape mismatch");
  }
  Eigen::JacobiSVD<Matrix> svd(from.transpose() * to, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// ---------------------------------------------------------------------------
// k-means

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  double tolerance = 1e-8;  // relative change of the within-cluster sum of squares
};

struct KMeansResult {
  std::vector<int> labels;  // in {1..K}, numbered by first appearance
  Matrix centers;           // K x d, row c-1 is the center of label c
  double wcss = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // objective after every iteration of the winning restart
};

namespace detail {

inline double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

struct LloydRun {
  std::vector<int> assignment;
  Matrix centers;
  double wcss;
  int iterations;
  std::vector<double> trace;
};

inline LloydRun lloyd(const Matrix& x, int k, CounterRng& rng, const KMeansOptions& opt) {
  const Eigen::Index t = x.rows();
  Matrix centers(k, x.cols());

  // k-means++ seeding.
  std::vector<double> nearest(static_cast<std::size_t>(t), std::numeric_limits<double>::infinity());
  Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(t)));
  centers.row(0) = x.row(first);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(x, i, centers, c - 1));
      total += nearest[i];
    }
    Eigen::Index pick = 0;
    if (total > 0.0) {
      // D^2 sampling; points already covered by a center have zero weight.
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = -1;
      for (Eigen::Index i = 0; i < t; ++i) {
        if (nearest[i] <= 0.0) continue;
        cumulative += nearest[i];
        pick = i;
        if (cumulative > target) break;
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(t)));
    }
    centers.row(c) = x.row(pick);
  }

  LloydRun run{std::vector<int>(static_cast<std::size_t>(t), -1), centers, 0.0, 0, {}};
  double previous = std::numeric_limits<double>::infinity();
  std::vector<double> point_cost(static_cast<std::size_t>(t));
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    bool changed = false;
    double wcss = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
      int best = 0;
      double best_d = squared_distance(x, i, run.centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(x, i, run.centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.assignment[i] != best) changed = true;
      run.assignment[i] = best;
      point_cost[i] = best_d;
      wcss += best_d;
    }
    run.trace.push_back(wcss);
    run.iterations = iter + 1;

    // Update step. An empty cluster takes over the point farthest from its
    // center, which strictly lowers the objective.
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < t; ++i) {
      sums.row(run.assignment[i]) += x.row(i);
      ++counts[run.assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        run.centers.row(c) = sums.row(c) / counts[c];
      } else {
        auto far = static_cast<Eigen::Index>(
            std::max_element(point_cost.begin(), point_cost.end()) - point_cost.begin());
        run.centers.row(c) = x.row(far);
        point_cost[far] = 0.0;
        changed = true;
      }
    }
    run.wcss = wcss;
    if (!changed) break;
    if (std::isfinite(previous) && previous - wcss <= opt.tolerance * std::max(previous, 1e-300)) break;
    previous = wcss;
  }
  // Final objective with respect to the last centers.
  double wcss = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) {
    int best = 0;
    double best_d = squared_distance(x, i, run.centers, 0);
    for (int c = 1; c < k; ++c) {
      const double d = squared_distance(x, i, run.centers, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    run.assignment[i] = best;
    wcss += best_d;
  }
  if (wcss < run.trace.back()) run.trace.push_back(wcss);
  run.wcss = wcss;
  return run;
}

}  // namespace detail

// Lloyd's k-means with k-means++ seeding, best of `restarts` runs.
//
// Rows are processed in a canonical (lexicographic) order, so the result is
// invariant to the order of the input points for a fixed seed. Labels are
// numbered by first appearance in the caller's point order.
inline KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                           const KMeansOptions& opt = {}) {
  const Eigen::Index t = points.rows();
  if (k < 1) throw InputError("kmeans: K must be >= 1");
  if (k > t) {
    throw InputError("kmeans: K=" + std::to_string(k) + " exceeds the number of points " +
                     std::to_string(t));
  }
  if (opt.restarts < 1) throw InputError("kmeans: restarts must be >= 1");
  if (!points.allFinite()) throw NumericError("kmeans: non-finite point coordinates");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return false;
  });
  Matrix canon(t, points.cols());
  for (Eigen::Index i = 0; i < t; ++i) canon.row(i) = points.row(order[i]);

  detail::LloydRun best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opt.restarts; ++r) {
    CounterRng rng(seed, Stream::kmeans, static_cast<std::uint64_t>(r));
    auto run = detail::lloyd(canon, k, rng, opt);
    if (run.wcss < best.wcss) best = std::move(run);
  }

  KMeansResult out;
  out.wcss = best.wcss;
  out.iterations = best.iterations;
  out.trace = std::move(best.trace);
  out.labels.assign(static_cast<std::size_t>(t), 0);
  std::vector<int> relabel(static_cast<std::size_t>(k), 0);
  std::vector<int> raw(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) raw[order[i]] = best.assignment[i];
  int next = 0;
  out.centers = Matrix::Zero(k, points.cols());
  for (Eigen::Index i = 0; i < t; ++i) {
    int& slot = relabel[raw[i]];
    if (slot == 0) {
      slot = ++next;
      out.centers.row(slot - 1) = best.centers.row(raw[i]);
    }
    out.labels[i] = slot;
  }
  return out;
}

}  // namespace netclust
