#pragma once

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "netclust/distance.hpp"
#include "netclust/error.hpp"
#include "netclust/moments.hpp"

namespace netclust {

enum class FeatureMethod { nclm, topeig, graphstats };

inline std::string to_string(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::nclm: return "nclm";
    case FeatureMethod::topeig: return "topeig";
    case FeatureMethod::graphstats: return "graphstats";
  }
  return "?";
}

inline FeatureMethod feature_method_from_string(const std::string& s) {
  if (s == "nclm") return FeatureMethod::nclm;
  if (s == "topeig") return FeatureMethod::topeig;
  if (s == "graphstats") return FeatureMethod::graphstats;
  throw InputError("unknown feature method '" + s + "'");
}

struct FeatureVector {
  FeatureMethod method = FeatureMethod::nclm;
  std::vector<double> values;
  int order = 0;         // J for nclm/topeig, 6 for graphstats
  bool flagged = false;  // some coordinate fell back to a degenerate-case default
};

inline constexpr double kDefaultMomentFloor = 1e-15;

// g_J = (log max(m_2, floor), ..., log max(m_J, floor)).
inline FeatureVector log_moment_features(const MomentVector& m, int j, double floor = kDefaultMomentFloor) {
  if (!(floor > 0.0)) throw InputError("log_moment_features: floor must be positive");
  FeatureVector f{FeatureMethod::nclm, {}, j, false};
  for (int k = 2; k <= j; ++k) f.values.push_back(std::log(std::max(m.moment(k), floor)));
  return f;
}

inline FeatureVector log_moment_features(const Graph& g, int j, double floor = kDefaultMomentFloor) {
  return log_moment_features(graph_moments(g, j), j, floor);
}

// Pairwise Euclidean distances between feature vectors.
inline DistanceMatrix feature_distance_matrix(std::span<const FeatureVector> features) {
  const auto t = static_cast<Eigen::Index>(features.size());
  if (t < 1) throw InputError("feature_distance_matrix: no features");
  for (const auto& f : features) {
    if (f.method != features[0].method) throw InputError("feature_distance_matrix: mixed feature methods");
    if (f.values.size() != features[0].values.size()) {
      throw InputError("feature_distance_matrix: mixed feature lengths");
    }
    for (double v : f.values) {
      if (!std::isfinite(v)) throw NumericError("feature_distance_matrix: non-finite feature");
    }
  }
  Matrix d = Matrix::Zero(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i + 1; j < t; ++j) {
      const auto& a = features[static_cast<std::size_t>(i)].values;
      const auto& b = features[static_cast<std::size_t>(j)].values;
      double s = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
      d(i, j) = std::sqrt(s);
    }
  }
  return DistanceMatrix(std::move(d));
}

// Feature cache CSV: graph_id,method,J,v1..vJ
inline void write_features_csv(std::span<const FeatureVector> features, const std::vector<std::string>& ids,
                               std::ostream& out) {
  std::size_t width = 0;
  for (const auto& f : features) width = std::max(width, f.values.size());
  out << std::setprecision(17) << "graph_id,method,J";
  for (std::size_t c = 1; c <= width; ++c) out << ",v" << c;
  out << '\n';
  for (std::size_t i = 0; i < features.size(); ++i) {
    out << ids[i] << ',' << to_string(features[i].method) << ',' << features[i].order;
    for (double v : features[i].values) out << ',' << v;
    out << '\n';
  }
}

struct FeatureRow {
  std::string graph_id;
  FeatureVector features;
};

inline std::vector<FeatureRow> read_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("graph_id,method,J", 0) != 0) {
    throw InputError("feature csv: missing header");
  }
  std::vector<FeatureRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, method, order, cell;
    if (!std::getline(fields, id, ',') || !std::getline(fields, method, ',') || !std::getline(fields, order, ',')) {
      throw InputError("feature csv: malformed row '" + line + "'");
    }
    FeatureRow row{id, {feature_method_from_string(method), {}, std::stoi(order), false}};
    while (std::getline(fields, cell, ',')) row.features.values.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace netclust
