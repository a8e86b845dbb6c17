#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <string>

#include "netclust/error.hpp"
#include "netclust/linalg.hpp"

namespace netclust {

// Symmetric n x n matrix of edge probabilities (P or an estimate of it).
// Entries lie in [0, 1]. Construction mirrors the upper triangle.
class LinkProbMatrix {
 public:
  LinkProbMatrix() = default;
  explicit LinkProbMatrix(Matrix m) {
    if (m.rows() != m.cols()) throw InputError("LinkProbMatrix: matrix is not square");
    m.triangularView<Eigen::StrictlyLower>() = m.transpose();
    if (!m.allFinite()) throw NumericError("LinkProbMatrix: non-finite entry");
    if (m.size() > 0 && (m.minCoeff() < 0.0 || m.maxCoeff() > 1.0)) {
      throw InputError("LinkProbMatrix: entries must lie in [0, 1]");
    }
    m_ = std::move(m);
  }

  Eigen::Index order() const noexcept { return m_.rows(); }
  const Matrix& values() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  // Squared Frobenius distance to another matrix of the same order.
  double squared_distance(const LinkProbMatrix& other) const {
    if (other.order() != order()) throw InputError("LinkProbMatrix: order mismatch");
    return (m_ - other.m_).squaredNorm();
  }

 private:
  Matrix m_;
};

// ---------------------------------------------------------------------------
// Binary cache format (.lpm): 8-byte magic "NCLPM\0\0\1", n as 8-byte
// little-endian unsigned, then the upper triangle (diagonal included) row by
// row as little-endian IEEE-754 doubles.

inline constexpr char kLpmMagic[8] = {'N', 'C', 'L', 'P', 'M', 0, 0, 1};

namespace detail {

inline void put_le64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

inline std::uint64_t get_le64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw InputError("lpm: truncated file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace detail

inline void write_lpm(const LinkProbMatrix& p, std::ostream& out) {
  out.write(kLpmMagic, 8);
  const auto n = p.order();
  detail::put_le64(out, static_cast<std::uint64_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      std::uint64_t bits;
      const double v = p(i, j);
      std::memcpy(&bits, &v, 8);
      detail::put_le64(out, bits);
    }
  }
}

inline LinkProbMatrix read_lpm(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kLpmMagic, 8) != 0) throw InputError("lpm: bad magic");
  const auto n = static_cast<Eigen::Index>(detail::get_le64(in));
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const std::uint64_t bits = detail::get_le64(in);
      double v;
      std::memcpy(&v, &bits, 8);
      m(i, j) = v;
    }
  }
  return LinkProbMatrix(std::move(m));
}

inline void save_lpm(const LinkProbMatrix& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  write_lpm(p, out);
}

inline LinkProbMatrix load_lpm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_lpm(in);
}

inline void write_lpm_csv(const LinkProbMatrix& p, std::ostream& out) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < p.order(); ++i) {
    for (Eigen::Index j = 0; j < p.order(); ++j) {
      if (j) out << ',';
      out << p(i, j);
    }
    out << '\n';
  }
}

}  // namespace netclust
