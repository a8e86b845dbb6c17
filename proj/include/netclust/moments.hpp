#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/graph.hpp"

namespace netclust {

// Normalized traces m_k = trace((A/n)^k) for k = 2..J.
class MomentVector {
 public:
  MomentVector(int max_order, std::size_t n, std::vector<double> values)
      : max_order_(max_order), n_(n), values_(std::move(values)) {
    if (max_order_ < 2) throw InputError("MomentVector: J must be >= 2");
    if (values_.size() != static_cast<std::size_t>(max_order_ - 1)) {
      throw InputError("MomentVector: expected J - 1 values");
    }
  }

  int max_order() const noexcept { return max_order_; }
  std::size_t node_count() const noexcept { return n_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double moment(int k) const {
    if (k < 2 || k > max_order_) throw InputError("MomentVector: order " + std::to_string(k) + " not available");
    return values_[static_cast<std::size_t>(k - 2)];
  }

  // psi_k = n m_k / (k sqrt 2), the scaling under which moments concentrate
  // with an n-free sub-Gaussian tail.
  double psi(int k) const {
    return static_cast<double>(n_) * moment(k) / (static_cast<double>(k) * std::numbers::sqrt2);
  }

  // The first orders 2..j as a new vector.
  MomentVector prefix(int j) const {
    if (j < 2 || j > max_order_) throw InputError("MomentVector: bad prefix order");
    return MomentVector(j, n_, std::vector<double>(values_.begin(), values_.begin() + (j - 1)));
  }

 private:
  int max_order_;
  std::size_t n_;
  std::vector<double> values_;
};

namespace detail {

// Sparse-aware dense vector: `support` lists the nonzero positions when
// `dense` is false.
struct WalkVector {
  std::vector<double> value;
  std::vector<NodeId> support;
  bool dense = false;
};

}  // namespace detail

// Exact closed-walk counts trace(A^k), k = 2..max_order, via the half-power
// identity trace(A^k) = <A^ceil(k/2), A^floor(k/2)>_F evaluated one column at a
// time: for each node i the walk vectors x_s = A^s e_i are built up to
// s = ceil(J/2) and trace(A^k) accumulates x_ceil(k/2) . x_floor(k/2).
//
// Early walk vectors are sparse and are propagated by scattering from their
// support; once the scatter would cost more than a full pass over the edges
// the vector is switched to a dense gather. Memory stays O(n J).
inline std::vector<double> closed_walk_counts(const Graph& g, int max_order) {
  if (max_order < 2) throw InputError("graph_moments: J must be >= 2");
  const std::size_t n = g.node_count();
  const int half = (max_order + 1) / 2;
  const double directed_edges = 2.0 * static_cast<double>(g.edge_count());

  std::vector<detail::WalkVector> walks(static_cast<std::size_t>(half) + 1);
  for (auto& w : walks) w.value.assign(n, 0.0);
  std::vector<char> marked(n, 0);
  std::vector<double> trace(static_cast<std::size_t>(max_order) + 1, 0.0);

  auto dot = [n](const detail::WalkVector& a, const detail::WalkVector& b) {
    double s = 0.0;
    if (!a.dense) {
      for (NodeId v : a.support) s += a.value[v] * b.value[v];
    } else if (!b.dense) {
      for (NodeId v : b.support) s += a.value[v] * b.value[v];
    } else {
      for (std::size_t v = 0; v < n; ++v) s += a.value[v] * b.value[v];
    }
    return s;
  };

  for (NodeId i = 0; i < n; ++i) {
    // x_0 = e_i
    auto& x0 = walks[0];
    x0.value[i] = 1.0;
    x0.support.assign(1, i);
    x0.dense = false;

    for (int s = 1; s <= half; ++s) {
      const auto& src = walks[static_cast<std::size_t>(s - 1)];
      auto& dst = walks[static_cast<std::size_t>(s)];
      double scatter_cost = directed_edges + 1.0;
      if (!src.dense) {
        scatter_cost = 0.0;
        for (NodeId v : src.support) scatter_cost += static_cast<double>(g.degree(v));
      }
      if (scatter_cost < directed_edges) {
        dst.support.clear();
        dst.dense = false;
        for (NodeId v : src.support) {
          const double weight = src.value[v];
          for (NodeId w : g.neighbors(v)) {
            if (!marked[w]) {
              marked[w] = 1;
              dst.support.push_back(w);
            }
            dst.value[w] += weight;
          }
        }
        for (NodeId w : dst.support) marked[w] = 0;
      } else {
        dst.dense = true;
        dst.support.clear();
        for (NodeId u = 0; u < n; ++u) {
          double acc = 0.0;
          for (NodeId v : g.neighbors(u)) acc += src.value[v];
          dst.value[u] = acc;
        }
      }
    }

    for (int k = 2; k <= max_order; ++k) {
      trace[static_cast<std::size_t>(k)] +=
          dot(walks[static_cast<std::size_t>((k + 1) / 2)], walks[static_cast<std::size_t>(k / 2)]);
    }

    // Reset for the next column.
    for (auto& w : walks) {
      if (w.dense) {
        std::fill(w.value.begin(), w.value.end(), 0.0);
      } else {
        for (NodeId v : w.support) w.value[v] = 0.0;
      }
    }
  }
  return std::vector<double>(trace.begin() + 2, trace.end());
}

inline MomentVector graph_moments(const Graph& g, int max_order) {
  auto counts = closed_walk_counts(g, max_order);
  const double n = static_cast<double>(g.node_count());
  std::vector<double> values(counts.size());
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    const int k = static_cast<int>(idx) + 2;
    values[idx] = n > 0 ? counts[idx] / std::pow(n, k) : 0.0;
  }
  return MomentVector(max_order, g.node_count(), std::move(values));
}

}  // namespace netclust
