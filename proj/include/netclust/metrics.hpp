#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "netclust/error.hpp"

namespace netclust {

// Minimum-cost perfect assignment on a square cost matrix (Kuhn-Munkres with
// potentials, O(K^3)). Returns column assigned to each row.
inline std::vector<int> hungarian_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

namespace detail {

inline std::vector<std::vector<double>> confusion(std::span<const int> pred, std::span<const int> truth, int k) {
  if (pred.size() != truth.size()) {
    throw InputError("clustering_error: label vectors differ in length (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw InputError("clustering_error: empty label vectors");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 1 || pred[i] > k || truth[i] < 1 || truth[i] > k) {
      throw InputError("clustering_error: labels must lie in 1..K");
    }
    c[static_cast<std::size_t>(pred[i] - 1)][static_cast<std::size_t>(truth[i] - 1)] += 1.0;
  }
  return c;
}

inline int label_range(std::span<const int> pred, std::span<const int> truth, int k) {
  for (int x : pred) k = std::max(k, x);
  for (int x : truth) k = std::max(k, x);
  return k;
}

}  // namespace detail

// Minimum over label permutations of the normalized Hamming distance between
// predicted and true labels, via optimal assignment on the confusion matrix.
// Labels above K widen the permutation range rather than failing.
inline double clustering_error(std::span<const int> pred, std::span<const int> truth, int k) {
  k = detail::label_range(pred, truth, k);
  const auto c = detail::confusion(pred, truth, k);
  std::vector<std::vector<double>> cost = c;
  for (auto& row : cost) {
    for (double& x : row) x = -x;
  }
  const auto assign = hungarian_assignment(cost);
  double matched = 0.0;
  for (int r = 0; r < k; ++r) matched += c[static_cast<std::size_t>(r)][static_cast<std::size_t>(assign[static_cast<std::size_t>(r)])];
  return 1.0 - matched / static_cast<double>(pred.size());
}

// Same quantity by enumerating all K! permutations; for cross-checking.
inline double clustering_error_bruteforce(std::span<const int> pred, std::span<const int> truth, int k) {
  k = detail::label_range(pred, truth, k);
  if (k > 9) throw InputError("clustering_error_bruteforce: K too large to enumerate");
  const auto c = detail::confusion(pred, truth, k);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double matched = 0.0;
    for (int r = 0; r < k; ++r) matched += c[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 1.0 - best / static_cast<double>(pred.size());
}

}  // namespace netclust
