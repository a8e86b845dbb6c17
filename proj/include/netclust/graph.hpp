#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netclust/error.hpp"

namespace netclust {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph on nodes [0, n) stored as sorted adjacency lists
// (CSR). Each undirected edge is kept once logically and appears in both
// endpoint lists. No self-loops, no multi-edges.
class Graph {
 public:
  Graph() = default;

  // Builds a graph from an edge list. Self-loops and duplicate edges are
  // silently dropped; endpoints outside [0, n) are rejected.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw InputError("edge endpoint out of range: (" + std::to_string(e.u) +
                         "," + std::to_string(e.v) + ") with n=" + std::to_string(n));
      }
      if (e.u == e.v) continue;
      canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.n_ = n;
    g.edge_count_ = canon.size();
    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : canon) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbors_.resize(2 * canon.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : canon) {
      g.neighbors_[fill[e.u]++] = e.v;
      g.neighbors_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
    }
    return g;
  }

  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    if (u >= n_ || v >= n_) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < n_; ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  // Original identifiers for ingested graphs; empty for generated graphs.
  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
  void set_node_ids(std::vector<std::string> ids) {
    if (!ids.empty() && ids.size() != n_) {
      throw InputError("node id map size does not match node count");
    }
    node_ids_ = std::move(ids);
  }

  // Relabels node v as perm[v].
  Graph permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw InputError("permutation size mismatch");
    std::vector<Edge> es = edges();
    for (Edge& e : es) {
      e = {static_cast<NodeId>(perm[e.u]), static_cast<NodeId>(perm[e.v])};
    }
    return from_edges(n_, es);
  }

  // Subgraph induced by `nodes`, re-indexed in the given order.
  Graph induced(std::span<const NodeId> nodes) const {
    std::vector<std::int64_t> index(n_, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<std::int64_t>(i);
    std::vector<Edge> es;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (NodeId w : neighbors(nodes[i])) {
        const auto j = index[w];
        if (j > static_cast<std::int64_t>(i)) es.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
    Graph sub = from_edges(nodes.size(), es);
    if (!node_ids_.empty()) {
      std::vector<std::string> ids;
      ids.reserve(nodes.size());
      for (NodeId v : nodes) ids.push_back(node_ids_[v]);
      sub.node_ids_ = std::move(ids);
    }
    return sub;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<std::string> node_ids_;
};

// Connected-component id per node; components numbered in order of their
// smallest node.
inline std::vector<std::size_t> connected_components(const Graph& g, std::size_t* count = nullptr) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.node_count(), unset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

// Induced subgraph on the largest connected component. Ties go to the
// component holding the smallest node id. Node order is preserved.
inline Graph largest_connected_component(const Graph& g) {
  if (g.node_count() == 0) throw InputError("largest_connected_component: empty graph");
  std::size_t count = 0;
  auto comp = connected_components(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  // max_element returns the first maximum, i.e. the lowest-numbered component.
  const auto best = static_cast<std::size_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> nodes;
  nodes.reserve(sizes[best]);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (comp[v] == best) nodes.push_back(v);
  }
  return g.induced(nodes);
}

// ---------------------------------------------------------------------------
// Edge-list text format
//
// One edge per line as two whitespace-separated node ids; lines starting
// with '#' are comments. A "# nodes: N" comment (SNAP writes "# Nodes: N")
// declares the node count, which preserves isolated nodes when all ids are
// integers below N. Otherwise ids are compacted to [0, n): numerically when
// every id is an integer, in order of first appearance when not.

struct EdgeListLoad {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

namespace detail {

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<std::size_t> declared_node_count(std::string_view comment) {
  std::string lower(comment);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto pos = lower.find("nodes:");
  if (pos == std::string::npos) return std::nullopt;
  std::istringstream rest(lower.substr(pos + 6));
  std::string token;
  if (!(rest >> token)) return std::nullopt;
  return parse_uint(token);
}

}  // namespace detail

inline EdgeListLoad parse_edge_list(std::istream& in, const std::string& source = "<stream>") {
  std::vector<std::pair<std::string, std::string>> raw;
  std::optional<std::size_t> declared;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!declared) declared = detail::declared_node_count(std::string_view(line).substr(first + 1));
      continue;
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw InputError(source + ":" + std::to_string(line_no) +
                       ": expected two node ids, got '" + line + "'");
    }
    raw.emplace_back(std::move(a), std::move(b));
  }
  if (raw.empty()) {
    // An edgeless graph is representable only through the node-count header.
    if (declared) return EdgeListLoad{Graph::from_edges(*declared, {}), 0, 0};
    throw InputError(source + ": edge list is empty");
  }

  bool numeric = true;
  std::uint64_t max_id = 0;
  for (const auto& [a, b] : raw) {
    auto ia = detail::parse_uint(a), ib = detail::parse_uint(b);
    if (!ia || !ib) {
      numeric = false;
      break;
    }
    max_id = std::max({max_id, *ia, *ib});
  }

  std::vector<std::string> ids;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::size_t n = 0;
  if (numeric && declared && max_id < *declared) {
    n = *declared;
    for (const auto& [a, b] : raw) {
      edges.push_back({static_cast<NodeId>(*detail::parse_uint(a)),
                       static_cast<NodeId>(*detail::parse_uint(b))});
    }
  } else if (numeric) {
    std::vector<std::uint64_t> distinct;
    for (const auto& [a, b] : raw) {
      distinct.push_back(*detail::parse_uint(a));
      distinct.push_back(*detail::parse_uint(b));
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    auto index_of = [&](const std::string& s) {
      auto v = *detail::parse_uint(s);
      return static_cast<NodeId>(std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin());
    };
    for (const auto& [a, b] : raw) edges.push_back({index_of(a), index_of(b)});
    n = distinct.size();
    for (auto v : distinct) ids.push_back(std::to_string(v));
  } else {
    std::unordered_map<std::string, NodeId> index;
    auto intern = [&](const std::string& s) {
      auto [it, inserted] = index.try_emplace(s, static_cast<NodeId>(ids.size()));
      if (inserted) ids.push_back(s);
      return it->second;
    };
    for (const auto& [a, b] : raw) {
      NodeId u = intern(a);
      NodeId v = intern(b);
      edges.push_back({u, v});
    }
    n = ids.size();
  }

  EdgeListLoad out;
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      ++out.self_loops_dropped;
    } else {
      canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
  }
  out.graph = Graph::from_edges(n, canon);
  out.duplicates_dropped = canon.size() - out.graph.edge_count();
  // Identity maps carry no information.
  bool identity = true;
  for (std::size_t i = 0; i < ids.size() && identity; ++i) identity = ids[i] == std::to_string(i);
  if (!identity) out.graph.set_node_ids(std::move(ids));
  return out;
}

inline EdgeListLoad load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list: " + path);
  return parse_edge_list(in, path);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes: " << g.node_count() << " edges: " << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list: " + path);
  write_edge_list(g, out);
}

}  // namespace netclust
