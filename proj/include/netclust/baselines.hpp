#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/features.hpp"
#include "netclust/graph.hpp"
#include "netclust/linalg.hpp"

namespace netclust {

// The J largest-in-magnitude eigenvalues of A/n, signed, by descending
// magnitude (positive first on ties).
inline FeatureVector topeig_features(const Graph& g, int j) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (j < 1 || j > n) {
    throw InputError("topeig: need 1 <= J <= n (J=" + std::to_string(j) + ", n=" + std::to_string(n) + ")");
  }
  FeatureVector f{FeatureMethod::topeig, {}, j, false};
  if (g.edge_count() == 0) {
    f.values.assign(static_cast<std::size_t>(j), 0.0);
    return f;
  }
  const Vector asc = sym_eigenvalues(adjacency_matrix(g));
  const auto order = detail::eigen_order(asc, EigenOrder::largest_magnitude);
  for (int i = 0; i < j; ++i) f.values.push_back(asc(order[static_cast<std::size_t>(i)]) / static_cast<double>(n));
  return f;
}

// Second-smallest eigenvalue of the normalized Laplacian
// I - D^{-1/2} A D^{-1/2} of the largest connected component.
inline double algebraic_connectivity(const Graph& g) {
  if (g.node_count() == 0) throw InputError("algebraic_connectivity: empty graph");
  const Graph core = largest_connected_component(g);
  const auto n = static_cast<Eigen::Index>(core.node_count());
  if (n < 2) throw InputError("algebraic_connectivity: largest component is a single node");
  Matrix l = Matrix::Identity(n, n);
  for (const Edge& e : core.edges()) {
    const double w = -1.0 / std::sqrt(static_cast<double>(core.degree(e.u)) * static_cast<double>(core.degree(e.v)));
    l(e.u, e.v) = w;
    l(e.v, e.u) = w;
  }
  return sym_eigenvalues(SymMatrix(std::move(l)))(1);
}

// Triangles through each node.
inline std::vector<std::uint64_t> triangles_per_node(const Graph& g) {
  std::vector<std::uint64_t> tri(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto nu = g.neighbors(u);
    for (NodeId v : nu) {
      if (v <= u) continue;
      auto nv = g.neighbors(v);
      // Common neighbors w > v close triangle (u, v, w) exactly once.
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++tri[u];
          ++tri[v];
          ++tri[*a];
          ++a;
          ++b;
        }
      }
    }
  }
  return tri;
}

struct ClusteringCoefficients {
  double global = 0.0;  // 3 * triangles / connected triples
  double local = 0.0;   // mean over nodes with degree >= 2
};

inline ClusteringCoefficients clustering_coefficients(const Graph& g) {
  const auto tri = triangles_per_node(g);
  double closed = 0.0, triples = 0.0;
  std::vector<double> ratios;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    const double centered = d * (d - 1.0) / 2.0;
    closed += static_cast<double>(tri[v]);
    triples += centered;
    if (g.degree(v) >= 2) ratios.push_back(static_cast<double>(tri[v]) / centered);
  }
  // Summing in sorted order keeps the average bit-identical under relabeling.
  std::sort(ratios.begin(), ratios.end());
  double local_sum = 0.0;
  for (double r : ratios) local_sum += r;
  ClusteringCoefficients out;
  out.global = triples > 0.0 ? closed / triples : 0.0;
  out.local = ratios.empty() ? 0.0 : local_sum / static_cast<double>(ratios.size());
  return out;
}

// Fraction of unordered node pairs at geodesic distance <= h. Pairs in
// different components count as farther than h.
inline double distance_distribution(const Graph& g, int h) {
  if (h < 1) throw InputError("distance_distribution: h must be >= 1");
  const std::size_t n = g.node_count();
  if (n < 2) return 0.0;
  std::vector<int> dist(n, -1);
  std::vector<NodeId> frontier, touched;
  std::uint64_t within = 0;  // ordered pairs
  for (NodeId s = 0; s < n; ++s) {
    touched.assign(1, s);
    dist[s] = 0;
    frontier.assign(1, s);
    for (int level = 1; level <= h && !frontier.empty(); ++level) {
      std::vector<NodeId> next;
      for (NodeId v : frontier) {
        for (NodeId w : g.neighbors(v)) {
          if (dist[w] < 0) {
            dist[w] = level;
            next.push_back(w);
            touched.push_back(w);
          }
        }
      }
      within += next.size();
      frontier.swap(next);
    }
    for (NodeId v : touched) dist[v] = -1;
  }
  return static_cast<double>(within) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Pearson correlation of endpoint degrees over both orientations of every
// edge. Regular graphs (zero variance) give 0.
inline double assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw InputError("assortativity: graph has no edges");
  double sum = 0.0, sum_sq = 0.0, sum_xy = 0.0;
  for (const Edge& e : g.edges()) {
    const double a = static_cast<double>(g.degree(e.u));
    const double b = static_cast<double>(g.degree(e.v));
    sum += a + b;
    sum_sq += a * a + b * b;
    sum_xy += 2.0 * a * b;
  }
  const double m = 2.0 * static_cast<double>(g.edge_count());
  const double mean = sum / m;
  const double var = sum_sq / m - mean * mean;
  if (var <= 1e-12 * std::max(1.0, mean * mean)) return 0.0;
  return std::clamp((sum_xy / m - mean * mean) / var, -1.0, 1.0);
}

// Edge density among nodes whose degree is strictly above the nearest-rank
// `quantile` of the degree sequence; 0 when fewer than two such nodes.
inline double rich_club(const Graph& g, double quantile = 0.8) {
  if (!(quantile > 0.0 && quantile <= 1.0)) throw InputError("rich_club: quantile must lie in (0, 1]");
  const std::size_t n = g.node_count();
  if (n == 0) return 0.0;
  std::vector<std::size_t> degrees(n);
  for (NodeId v = 0; v < n; ++v) degrees[v] = g.degree(v);
  std::vector<std::size_t> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n) - 1e-12)), 1, n);
  const std::size_t threshold = sorted[rank - 1];

  std::vector<NodeId> club;
  for (NodeId v = 0; v < n; ++v) {
    if (degrees[v] > threshold) club.push_back(v);
  }
  if (club.size() < 2) return 0.0;
  std::size_t inside = 0;
  for (NodeId v : club) {
    for (NodeId w : g.neighbors(v)) {
      if (w > v && degrees[w] > threshold) ++inside;
    }
  }
  const double pairs = static_cast<double>(club.size()) * static_cast<double>(club.size() - 1) / 2.0;
  return static_cast<double>(inside) / pairs;
}

inline constexpr int kGraphStatCount = 6;

// (algebraic connectivity, global cc, local cc, 3-hop distance distribution,
// assortativity, rich-club). A statistic whose precondition fails is
// reported as 0 and the vector is flagged.
inline FeatureVector graph_stats_features(const Graph& g) {
  FeatureVector f{FeatureMethod::graphstats, std::vector<double>(kGraphStatCount, 0.0), kGraphStatCount, false};
  try {
    f.values[0] = algebraic_connectivity(g);
  } catch (const InputError&) {
    f.flagged = true;
  }
  const auto cc = clustering_coefficients(g);
  f.values[1] = cc.global;
  f.values[2] = cc.local;
  f.values[3] = distance_distribution(g, 3);
  try {
    f.values[4] = assortativity(g);
  } catch (const InputError&) {
    f.flagged = true;
  }
  f.values[5] = rich_club(g, 0.8);
  return f;
}

}  // namespace netclust
