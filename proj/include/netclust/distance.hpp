#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/linalg.hpp"

namespace netclust {

// T x T symmetric, nonnegative, zero-diagonal matrix of pairwise distances
// between graphs. The upper triangle is authoritative.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Matrix m) {
    if (m.rows() != m.cols()) throw InputError("DistanceMatrix: matrix is not square");
    m.triangularView<Eigen::StrictlyLower>() = m.transpose();
    if (!m.allFinite()) throw NumericError("DistanceMatrix: non-finite entry");
    if (m.size() > 0 && m.minCoeff() < 0.0) throw InputError("DistanceMatrix: negative entry");
    m.diagonal().setZero();
    m_ = std::move(m);
  }

  Eigen::Index size() const noexcept { return m_.rows(); }
  const Matrix& values() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  // Median of the strictly-upper-triangular entries (0 when T < 2).
  double median_offdiagonal() const {
    std::vector<double> v;
    for (Eigen::Index i = 0; i < size(); ++i) {
      for (Eigen::Index j = i + 1; j < size(); ++j) v.push_back(m_(i, j));
    }
    if (v.empty()) return 0.0;
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
  }

 private:
  Matrix m_;
};

struct ClusterAssignment {
  std::vector<int> labels;  // one label in {1..k} per graph
  int k = 1;
  std::string method;
  std::optional<std::vector<int>> truth;
};

// CSV with a header row of graph ids and one row per graph, prefixed by its id.
inline void write_matrix_csv(const Matrix& m, const std::vector<std::string>& ids, std::ostream& out) {
  out << std::setprecision(17) << "graph_id";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << m(i, j);
    out << '\n';
  }
}

inline void write_assignment_csv(const ClusterAssignment& a, const std::vector<std::string>& ids,
                                 std::ostream& out) {
  out << "graph_id,label\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) out << ids[i] << ',' << a.labels[i] << '\n';
}

}  // namespace netclust
