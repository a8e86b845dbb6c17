#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/graph.hpp"
#include "netclust/link_prob.hpp"
#include "netclust/linalg.hpp"
#include "netclust/parallel.hpp"
#include "netclust/random.hpp"

namespace netclust {

// Closed-form symmetric functions on [0,1]^2 usable as smooth graphons.
enum class SmoothKind {
  constant,           // f = c
  product,            // f = u * v
  sine,               // f = (sin(5*pi*(u + v - 1) + 1) + 1) / 2
  logistic_distance,  // f = 1 - 1 / (1 + exp(15 * (0.8|u - v|)^(4/5) - 0.1))
  grid,               // piecewise constant on an m x m grid of equal cells
};

inline std::string to_string(SmoothKind k) {
  switch (k) {
    case SmoothKind::constant: return "constant";
    case SmoothKind::product: return "product";
    case SmoothKind::sine: return "sine";
    case SmoothKind::logistic_distance: return "logistic-distance";
    case SmoothKind::grid: return "grid";
  }
  return "?";
}

inline SmoothKind smooth_kind_from_string(const std::string& s) {
  for (auto k : {SmoothKind::constant, SmoothKind::product, SmoothKind::sine,
                 SmoothKind::logistic_distance, SmoothKind::grid}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown smooth graphon '" + s + "'");
}

struct SmoothFunction {
  SmoothKind kind = SmoothKind::constant;
  double constant = 0.0;   // used by `constant`
  Matrix grid;             // used by `grid`
  double amplitude = 1.0;  // multiplies the whole function

  double operator()(double u, double v) const {
    double f = 0.0;
    switch (kind) {
      case SmoothKind::constant:
        f = constant;
        break;
      case SmoothKind::product:
        f = u * v;
        break;
      case SmoothKind::sine:
        f = (std::sin(5.0 * std::numbers::pi * (u + v - 1.0) + 1.0) + 1.0) / 2.0;
        break;
      case SmoothKind::logistic_distance:
        f = 1.0 - 1.0 / (1.0 + std::exp(15.0 * std::pow(0.8 * std::abs(u - v), 0.8) - 0.1));
        break;
      case SmoothKind::grid: {
        const auto m = grid.rows();
        auto cell = [m](double x) {
          return std::min<Eigen::Index>(m - 1, static_cast<Eigen::Index>(x * static_cast<double>(m)));
        };
        f = grid(cell(u), cell(v));
        break;
      }
    }
    return amplitude * f;
  }
};

// Default smooth graphon for the smooth-mixture scenario. The exact smooth
// graphon of the original study is not recoverable, so this is a stand-in.
inline SmoothFunction default_smooth_standin() {
  return SmoothFunction{SmoothKind::logistic_distance, 0.0, {}, 1.0};
}

// Edge-probability model P_ij = rho * f(xi_i, xi_j) with xi_i iid uniform.
// A blockmodel is the step graphon whose blocks partition [0,1] according to
// the block proportions.
class Graphon {
 public:
  static Graphon blockmodel(Matrix block, std::vector<double> proportions, double rho = 1.0) {
    Graphon g;
    g.is_block_ = true;
    g.block_ = std::move(block);
    g.proportions_ = std::move(proportions);
    g.rho_ = rho;
    g.validate();
    return g;
  }

  // B = (p - q) I_m + q E_m with equal block proportions.
  static Graphon planted_partition(double p, double q, int m, double rho = 1.0) {
    if (m < 1) throw InputError("planted_partition: m must be >= 1");
    Matrix b = Matrix::Constant(m, m, q);
    b.diagonal().setConstant(p);
    return blockmodel(std::move(b), std::vector<double>(static_cast<std::size_t>(m), 1.0 / m), rho);
  }

  static Graphon smooth(SmoothFunction f, double rho = 1.0) {
    Graphon g;
    g.is_block_ = false;
    g.smooth_ = std::move(f);
    g.rho_ = rho;
    g.validate();
    return g;
  }

  bool is_blockmodel() const noexcept { return is_block_; }
  double rho() const noexcept { return rho_; }
  const Matrix& block_matrix() const noexcept { return block_; }
  const std::vector<double>& proportions() const noexcept { return proportions_; }
  const SmoothFunction& smooth_function() const noexcept { return smooth_; }

  // Block index of latent position x in [0,1).
  int block_of(double x) const {
    double cumulative = 0.0;
    for (std::size_t b = 0; b + 1 < proportions_.size(); ++b) {
      cumulative += proportions_[b];
      if (x < cumulative) return static_cast<int>(b);
    }
    return static_cast<int>(proportions_.size()) - 1;
  }

  // Shape function f (without rho).
  double shape(double x, double y) const {
    if (is_block_) return block_(block_of(x), block_of(y));
    return smooth_(x, y);
  }

  double probability(double x, double y) const { return rho_ * shape(x, y); }

  // E[rho f(xi, xi')] for independent uniforms: exact for blockmodels,
  // 512 x 512 midpoint rule otherwise.
  double mean_probability() const {
    if (is_block_) {
      Eigen::Map<const Vector> pi(proportions_.data(), static_cast<Eigen::Index>(proportions_.size()));
      return rho_ * pi.dot(block_ * pi);
    }
    constexpr int grid = 512;
    double sum = 0.0;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        sum += smooth_((i + 0.5) / grid, (j + 0.5) / grid);
      }
    }
    return rho_ * sum / (grid * grid);
  }

  Graphon with_rho(double rho) const {
    Graphon g = *this;
    g.rho_ = rho;
    g.validate();
    return g;
  }

  // The same graphon with its shape multiplied by `factor`.
  Graphon scaled(double factor) const {
    Graphon g = *this;
    if (is_block_) {
      g.block_ *= factor;
    } else {
      g.smooth_.amplitude *= factor;
    }
    g.validate();
    return g;
  }

  std::string describe() const {
    std::ostringstream out;
    if (is_block_) {
      out << "blockmodel(K=" << block_.rows() << ", rho=" << rho_ << ")";
    } else {
      out << "smooth(" << to_string(smooth_.kind) << ", amplitude=" << smooth_.amplitude
          << ", rho=" << rho_ << ")";
    }
    return out.str();
  }

 private:
  Graphon() = default;

  void validate() const {
    if (!(rho_ > 0.0 && rho_ <= 1.0)) throw InputError("graphon: rho must lie in (0, 1]");
    if (is_block_) {
      const auto k = block_.rows();
      if (k < 1 || block_.cols() != k) throw InputError("graphon: block matrix must be square");
      if (static_cast<Eigen::Index>(proportions_.size()) != k) {
        throw InputError("graphon: need one proportion per block");
      }
      if ((block_ - block_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
        throw InputError("graphon: block matrix must be symmetric");
      }
      if (block_.minCoeff() < 0.0 || block_.maxCoeff() > 1.0) {
        throw InputError("graphon: block probabilities must lie in [0, 1]");
      }
      double total = 0.0;
      for (double p : proportions_) {
        if (!(p > 0.0)) throw InputError("graphon: block proportions must be positive");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9) throw InputError("graphon: block proportions must sum to 1");
    } else {
      if (smooth_.kind == SmoothKind::grid) {
        if (smooth_.grid.rows() < 1 || smooth_.grid.rows() != smooth_.grid.cols()) {
          throw InputError("graphon: grid must be square and non-empty");
        }
        if ((smooth_.grid - smooth_.grid.transpose()).cwiseAbs().maxCoeff() > 0.0) {
          throw InputError("graphon: grid must be symmetric");
        }
      }
      // Range check on a lattice that includes the boundary.
      constexpr int lattice = 256;
      for (int i = 0; i <= lattice; ++i) {
        for (int j = 0; j <= i; ++j) {
          const double f = rho_ * smooth_(std::min(i / double(lattice), 1.0 - 1e-12),
                                          std::min(j / double(lattice), 1.0 - 1e-12));
          if (!(f >= 0.0 && f <= 1.0)) {
            throw InputError("graphon: rho * f leaves [0, 1] at (" + std::to_string(i / double(lattice)) +
                             ", " + std::to_string(j / double(lattice)) + ")");
          }
        }
      }
    }
  }

  bool is_block_ = true;
  Matrix block_;
  std::vector<double> proportions_;
  SmoothFunction smooth_;
  double rho_ = 1.0;
};

// rho that gives expected mean degree `degree` on n nodes for a graphon whose
// shape is `base` (its own rho is ignored).
inline double rho_for_mean_degree(const Graphon& base, std::size_t n, double degree) {
  const double mean_shape = base.mean_probability() / base.rho();
  if (!(mean_shape > 0.0)) throw InputError("rho_for_mean_degree: graphon is identically zero");
  const double rho = degree / (static_cast<double>(n - 1) * mean_shape);
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw InputError("rho_for_mean_degree: target degree " + std::to_string(degree) +
                     " needs rho=" + std::to_string(rho) + " outside (0, 1]");
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Sampling
//
// Latent positions are keyed by (seed, latent_key, node) and edge coins by
// (seed, graph_key, i, j). Graphs in one collection share latent_key, which
// is what gives them node correspondence.

inline std::vector<double> latent_positions(std::size_t n, std::uint64_t seed,
                                            std::uint64_t latent_key = 0) {
  std::vector<double> xi(n);
  for (std::size_t v = 0; v < n; ++v) {
    xi[v] = to_open_unit(counter_bits(seed, static_cast<std::uint64_t>(Stream::latent), latent_key, v));
  }
  return xi;
}

// Realized link-probability matrix; the diagonal is zero since A_ii = 0.
inline LinkProbMatrix link_probabilities(const Graphon& g, std::span<const double> xi) {
  const auto n = static_cast<Eigen::Index>(xi.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) p(i, j) = g.probability(xi[i], xi[j]);
  }
  return LinkProbMatrix(std::move(p));
}

inline Graph sample_from_latent(const Graphon& g, std::span<const double> xi, std::uint64_t seed,
                                std::uint64_t graph_key) {
  const std::size_t n = xi.size();
  // Prefix of counter_bits(seed, edge, graph_key, i, j), hoisted out of the loops.
  std::uint64_t prefix = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  prefix = mix64(prefix ^ static_cast<std::uint64_t>(Stream::edge));
  prefix = mix64(prefix ^ (graph_key * 0xD1B54A32D192ED03ULL));

  std::vector<int> blocks;
  if (g.is_blockmodel()) {
    blocks.resize(n);
    for (std::size_t v = 0; v < n; ++v) blocks[v] = g.block_of(xi[v]);
  }
  const Matrix scaled_block = g.is_blockmodel() ? Matrix(g.rho() * g.block_matrix()) : Matrix();

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t row = mix64(prefix ^ (i * 0xABC98388FB8FAC03ULL));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = g.is_blockmodel() ? scaled_block(blocks[i], blocks[j]) : g.probability(xi[i], xi[j]);
      if (p <= 0.0) continue;
      const double u = to_unit(mix64(row ^ (j * 0x8CB92BA72F3D8DD7ULL)));
      if (u < p) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return Graph::from_edges(n, edges);
}

inline Graph sample_graphon(const Graphon& g, std::size_t n, std::uint64_t seed,
                            std::uint64_t graph_key = 0, std::uint64_t latent_key = 0) {
  if (n < 2) throw InputError("sample_graphon: need n >= 2");
  const auto xi = latent_positions(n, seed, latent_key);
  return sample_from_latent(g, xi, seed, graph_key);
}

struct GraphWithTruth {
  Graph graph;
  LinkProbMatrix probabilities;
};

// As sample_graphon, also returning the realized P.
inline GraphWithTruth sample_graphon_with_probabilities(const Graphon& g, std::size_t n,
                                                        std::uint64_t seed, std::uint64_t graph_key = 0,
                                                        std::uint64_t latent_key = 0) {
  if (n < 2) throw InputError("sample_graphon: need n >= 2");
  const auto xi = latent_positions(n, seed, latent_key);
  return {sample_from_latent(g, xi, seed, graph_key), link_probabilities(g, xi)};
}

class MixtureModel {
 public:
  MixtureModel(std::vector<Graphon> components, std::vector<double> weights)
      : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.empty()) throw InputError("mixture: need at least one component");
    if (weights_.size() != components_.size()) throw InputError("mixture: one weight per component");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw InputError("mixture: weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("mixture: weights must sum to 1");
  }

  const std::vector<Graphon>& components() const noexcept { return components_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<Graphon> components_;
  std::vector<double> weights_;
};

struct LabeledGraph {
  Graph graph;
  int label;  // 1-based component index
};

namespace detail {

inline std::vector<LabeledGraph> sample_labeled(const MixtureModel& m, const std::vector<int>& labels,
                                                std::size_t n, std::uint64_t seed, unsigned jobs) {
  if (n < 2) throw InputError("sample_graphon: need n >= 2");
  const auto xi = latent_positions(n, seed, 0);
  std::vector<LabeledGraph> out(labels.size());
  parallel_for(labels.size(), jobs, [&](std::size_t t) {
    const auto& component = m.components()[static_cast<std::size_t>(labels[t] - 1)];
    out[t] = {sample_from_latent(component, xi, seed, t), labels[t]};
  });
  return out;
}

}  // namespace detail

// T graphs drawn i.i.d. from the mixture. Component labels are 1-based.
inline std::vector<LabeledGraph> sample_mixture(const MixtureModel& m, std::size_t count, std::size_t n,
                                                std::uint64_t seed, unsigned jobs = 1) {
  if (count < 1) throw InputError("sample_mixture: need T >= 1");
  std::vector<int> labels(count);
  for (std::size_t t = 0; t < count; ++t) {
    const double u = to_unit(counter_bits(seed, static_cast<std::uint64_t>(Stream::component), t));
    double cumulative = 0.0;
    int pick = 0;
    for (std::size_t c = 0; c < m.weights().size(); ++c) {
      if (m.weights()[c] <= 0.0) continue;
      pick = static_cast<int>(c);
      cumulative += m.weights()[c];
      if (u < cumulative) break;
    }
    labels[t] = pick + 1;
  }
  return detail::sample_labeled(m, labels, n, seed, jobs);
}

// Exactly counts[c] graphs from component c, in component order.
inline std::vector<LabeledGraph> sample_fixed_counts(const MixtureModel& m, std::span<const std::size_t> counts,
                                                     std::size_t n, std::uint64_t seed, unsigned jobs = 1) {
  if (counts.size() != m.components().size()) throw InputError("sample_fixed_counts: one count per component");
  std::vector<int> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c) + 1);
  if (labels.empty()) throw InputError("sample_fixed_counts: need T >= 1");
  return detail::sample_labeled(m, labels, n, seed, jobs);
}

}  // namespace netclust
