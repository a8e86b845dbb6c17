#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "netclust/graphon.hpp"
#include "netclust/metrics.hpp"
#include "netclust/nclm.hpp"
#include "oracles.hpp"

using namespace netclust;

namespace {

const Graph kTriangle = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});

FeatureVector nclm_vector(std::vector<double> v) {
  const int j = static_cast<int>(v.size()) + 1;
  return FeatureVector{FeatureMethod::nclm, std::move(v), j, false};
}

// Two clusters of two with within-distance 0 and between-distance d.
DistanceMatrix two_block_distance(double d) {
  Matrix m = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 2; j < 4; ++j) m(i, j) = m(j, i) = d;
  }
  return DistanceMatrix(m);
}

// Disjoint union of the given components.
Graph disjoint_union(const std::vector<const Graph*>& parts) {
  std::vector<Edge> edges;
  NodeId offset = 0;
  for (const Graph* g : parts) {
    for (const Edge& e : g->edges()) edges.push_back({e.u + offset, e.v + offset});
    offset += static_cast<NodeId>(g->node_count());
  }
  return Graph::from_edges(offset, edges);
}

Graph cube() {
  return Graph::from_edges(8, {{0, 1}, {1, 3}, {3, 2}, {2, 0}, {4, 5}, {5, 7}, {7, 6}, {6, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}});
}

Graph wagner() {
  std::vector<Edge> e;
  for (NodeId i = 0; i < 8; ++i) e.push_back({i, (i + 1) % 8});
  for (NodeId i = 0; i < 4; ++i) e.push_back({i, i + 4});
  return Graph::from_edges(8, e);
}

}  // namespace

TEST(LogMomentFeatures, Triangle) {
  const auto f = log_moment_features(kTriangle, 3);
  ASSERT_EQ(f.values.size(), 2u);
  EXPECT_NEAR(f.values[0], std::log(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(f.values[1], std::log(2.0 / 9.0), 1e-14);
  EXPECT_EQ(f.order, 3);
  EXPECT_EQ(f.method, FeatureMethod::nclm);
}

TEST(LogMomentFeatures, FloorHandlesZeroMoments) {
  const auto empty = log_moment_features(Graph::from_edges(5, std::span<const Edge>{}), 4, 1e-15);
  for (double v : empty.values) EXPECT_DOUBLE_EQ(v, std::log(1e-15));
  const auto square = log_moment_features(Graph::from_edges(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}), 4, 1e-15);
  EXPECT_DOUBLE_EQ(square.values[1], std::log(1e-15));
  EXPECT_GT(square.values[2], std::log(1e-15));
  EXPECT_THROW(log_moment_features(kTriangle, 3, 0.0), InputError);
}

TEST(LogMomentFeatures, InvariantUnderRelabeling) {
  std::mt19937_64 rng(61);
  const auto g = oracle::random_graph(40, 0.15, rng);
  const auto h = g.permuted(oracle::random_permutation(40, rng));
  EXPECT_EQ(log_moment_features(g, 6).values, log_moment_features(h, 6).values);
}

TEST(FeatureDistance, Examples) {
  const std::vector<FeatureVector> same{nclm_vector({1, 2}), nclm_vector({1, 2})};
  EXPECT_EQ(feature_distance_matrix(same).values(), Matrix::Zero(2, 2));
  const std::vector<FeatureVector> pair{nclm_vector({0, 0}), nclm_vector({3, 4})};
  EXPECT_DOUBLE_EQ(feature_distance_matrix(pair)(0, 1), 5.0);
  const std::vector<FeatureVector> mixed{nclm_vector({0, 0}), nclm_vector({3})};
  EXPECT_THROW(feature_distance_matrix(mixed), InputError);
}

TEST(FeatureDistance, TriangleInequality) {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<FeatureVector> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(nclm_vector({z(rng), z(rng), z(rng)}));
    const auto d = feature_distance_matrix(fs);
    EXPECT_LE(d(0, 2), d(0, 1) + d(1, 2) + 1e-12);
  }
}

TEST(FeatureCsv, RoundTrip) {
  const std::vector<FeatureVector> fs{nclm_vector({0.1, -2.5}), nclm_vector({1.0 / 3.0, 7.0})};
  std::stringstream buf;
  write_features_csv(fs, {"a", "b"}, buf);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "graph_id,method,J,v1,v2");
  const auto rows = read_features_csv(buf);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].graph_id, "b");
  EXPECT_EQ(rows[1].features.values, fs[1].values);
  EXPECT_EQ(rows[1].features.order, 3);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_from_distance(DistanceMatrix(Matrix::Zero(3, 3)), 2.0).values(), Matrix::Ones(3, 3));
  Matrix d = Matrix::Constant(2, 2, std::log(2.0));
  const auto k = kernel_from_distance(DistanceMatrix(d), 1.0);
  EXPECT_NEAR(k(0, 1), 0.5, 1e-15);
  EXPECT_EQ(k(0, 0), 1.0);
  EXPECT_EQ(k.bandwidth(), 1.0);
  const auto wide = kernel_from_distance(two_block_distance(1.0), 1e3);
  EXPECT_EQ(wide(0, 1), 1.0);
  EXPECT_LT(wide(0, 3), 1e-300);
  EXPECT_THROW(kernel_from_distance(two_block_distance(1.0), 0.0), InputError);
  EXPECT_THROW(kernel_from_distance(two_block_distance(1.0), -1.0), InputError);
}

TEST(Kernel, EntriesInUnitIntervalWithUnitDiagonal) {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> z;
  std::vector<FeatureVector> fs;
  for (int i = 0; i < 12; ++i) fs.push_back(nclm_vector({z(rng), z(rng)}));
  const auto k = kernel_from_distance(feature_distance_matrix(fs), 0.7);
  EXPECT_GT(k.values().minCoeff(), 0.0);
  EXPECT_LE(k.values().maxCoeff(), 1.0);
  EXPECT_EQ(k.values().diagonal(), Vector::Ones(12));
  EXPECT_EQ(k.values(), k.values().transpose());
}

TEST(TuneT, NeedsKPlusOneGraphs) {
  EXPECT_THROW(tune_t(two_block_distance(1.0), 4, {1.0}), InputError);
  EXPECT_THROW(tune_t(two_block_distance(1.0), 2, {}), InputError);
}

TEST(TuneT, TwoBlockGapFollowsClosedForm) {
  // Spectrum {2 + 2e, 2 - 2e, 0, 0} with e = exp(-t); lambda_3 sits below the
  // floor, so gap(t) = (2 - 2e) / (1e-12 (2 + 2e)), increasing in t.
  const std::vector<double> grid{2.0, 0.1, 1.0, 0.5};
  const auto r = tune_t(two_block_distance(1.0), 2, grid);
  ASSERT_EQ(r.grid, (std::vector<double>{0.1, 0.5, 1.0, 2.0}));
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double e = std::exp(-r.grid[i]);
    const double expected = (2 - 2 * e) / (kEigengapFloor * (2 + 2 * e));
    EXPECT_NEAR(r.gaps[i] / expected, 1.0, 1e-6) << r.grid[i];
  }
  EXPECT_EQ(r.t, 2.0);
}

TEST(TuneT, EquidistantGraphsHaveNoGap) {
  Matrix d = Matrix::Constant(6, 6, 1.0);
  const auto r = tune_t(DistanceMatrix(d), 2, {0.1, 1.0, 10.0});
  for (double g : r.gaps) EXPECT_NEAR(g, 0.0, 1e-9);
}

TEST(TuneT, TiesGoToTheSmallestBandwidth) {
  const auto r = tune_t(DistanceMatrix(Matrix::Zero(5, 5)), 2, {3.0, 0.2, 1.0});
  EXPECT_EQ(r.t, 0.2);
}

TEST(TuneT, DefaultGridIsLogSpacedAroundTheMedian) {
  const auto grid = default_t_grid(two_block_distance(4.0));
  ASSERT_EQ(grid.size(), 20u);
  // Off-diagonal upper entries: two zeros and four 4s, median 4.
  EXPECT_NEAR(grid.front(), 1e-3 / 4.0, 1e-18);
  EXPECT_NEAR(grid.back(), 1e3 / 4.0, 1e-9);
  EXPECT_NEAR(default_t_grid(DistanceMatrix(Matrix::Zero(3, 3))).front(), 1e-3, 1e-18);
}

TEST(TuneJ, IdenticalGraphsPickTheSmallestOrder) {
  std::mt19937_64 rng(64);
  const std::vector<Graph> gs(6, oracle::random_graph(30, 0.2, rng));
  const auto r = tune_J(std::span<const Graph>(gs), 2, 3, 6);
  EXPECT_EQ(r.j, 3);
  ASSERT_EQ(r.curve.size(), 4u);
  for (const auto& p : r.curve) EXPECT_NEAR(p.gap, 0.0, 1e-9);
}

TEST(TuneJ, FourthMomentSeparatedModelsNeedOrderFour) {
  // Cubes and Wagner graphs are both 3-regular and triangle-free on 8 nodes,
  // so m_2 and m_3 coincide; the cube has six 4-cycles, Wagner four.
  const Graph q3 = cube(), w8 = wagner();
  const auto a = graph_moments(q3, 4), b = graph_moments(w8, 4);
  ASSERT_EQ(a.moment(2), b.moment(2));
  ASSERT_EQ(a.moment(3), b.moment(3));
  ASSERT_NE(a.moment(4), b.moment(4));

  std::mt19937_64 rng(65);
  std::vector<Graph> gs;
  for (int t = 0; t < 16; ++t) {
    std::bernoulli_distribution pick_cube(t < 8 ? 0.8 : 0.2);
    std::vector<const Graph*> parts;
    for (int c = 0; c < 10; ++c) parts.push_back(pick_cube(rng) ? &q3 : &w8);
    gs.push_back(disjoint_union(parts).permuted(oracle::random_permutation(80, rng)));
  }
  const auto r = tune_J(std::span<const Graph>(gs), 2, 2, 6);
  EXPECT_GE(r.j, 4);
  EXPECT_NEAR(r.curve[0].gap, 0.0, 1e-9);
  EXPECT_NEAR(r.curve[1].gap, 0.0, 1e-9);
  EXPECT_GT(r.curve[2].gap, 0.0);
}

TEST(TuneJ, Preconditions) {
  std::mt19937_64 rng(66);
  const std::vector<Graph> gs(4, oracle::random_graph(10, 0.3, rng));
  EXPECT_THROW(tune_J(std::span<const Graph>(gs), 2, 1, 4), InputError);
  EXPECT_THROW(tune_J(std::span<const Graph>(gs), 2, 5, 4), InputError);
  EXPECT_THROW(tune_J(std::span<const Graph>(gs), 4, 2, 4), InputError);
  const auto moments = moments_all(gs, 3);
  EXPECT_THROW(tune_J(std::span<const MomentVector>(moments), 2, 2, 4), InputError);
}

TEST(NclmPipeline, SingleModelSingleCluster) {
  const auto model = Graphon::planted_partition(0.3, 0.1, 2);
  std::vector<Graph> gs;
  for (std::uint64_t s = 1; s <= 6; ++s) gs.push_back(sample_graphon(model, 60, s));
  const auto r = nclm_pipeline(gs, 4, 1, 1);
  const std::vector<int> ones(6, 1);
  EXPECT_EQ(clustering_error(r.clustering.assignment.labels, ones, 1), 0.0);
  EXPECT_EQ(r.clustering.assignment.method, "nclm");
}

TEST(NclmPipeline, DisjointDensitiesSeparateAtOrderTwo) {
  std::vector<Graph> gs;
  std::vector<int> truth;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const bool dense = s % 2 == 0;
    const auto model = Graphon::planted_partition(dense ? 0.6 : 0.2, dense ? 0.3 : 0.05, 2);
    // Mixed sizes: no node correspondence needed.
    gs.push_back(sample_graphon(model, 50 + 10 * s, s));
    truth.push_back(dense ? 2 : 1);
  }
  const auto r = nclm_pipeline(gs, 2, 2, 3);
  EXPECT_EQ(clustering_error(r.clustering.assignment.labels, truth, 2), 0.0);
  EXPECT_EQ(r.features.size(), 10u);
  EXPECT_EQ(r.clustering.kernel.bandwidth(), r.clustering.tuning.t);
}

TEST(NclmPipeline, KEqualToTSkipsTuning) {
  const std::vector<FeatureVector> fs{nclm_vector({0.0}), nclm_vector({1.0}), nclm_vector({5.0})};
  const auto r = kernel_spectral_cluster(fs, 3, 1);
  EXPECT_TRUE(r.tuning.gaps.empty());
  EXPECT_EQ(clustering_error(r.assignment.labels, std::vector<int>{1, 2, 3}, 3), 0.0);
}

TEST(Concentration, DeterministicModelHasNoSpread) {
  const auto probe = concentration_probe(Graphon::planted_partition(1.0, 0.0, 2), 40, 4, 30, 1);
  EXPECT_EQ(probe.std_psi, 0.0);
  for (double s : probe.std_log) EXPECT_EQ(s, 0.0);
  EXPECT_THROW(concentration_probe(Graphon::planted_partition(1.0, 0.0, 2), 40, 4, 29, 1), InputError);
}

TEST(Concentration, PsiSpreadIsBoundedAcrossSizes) {
  const auto model = Graphon::planted_partition(0.2, 0.1, 2);
  for (std::size_t n : {100u, 200u}) {
    const auto probe = concentration_probe(model, n, 3, 100, 7);
    EXPECT_LE(probe.std_psi, 10.0) << n;
    EXPECT_GT(probe.std_psi, 0.0) << n;
  }
}

TEST(Concentration, LogMomentSpreadShrinksWithSize) {
  const auto model = Graphon::planted_partition(0.2, 0.1, 2);
  std::vector<double> small(4, 0.0), large(4, 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = concentration_probe(model, 100, 5, 100, seed);
    const auto b = concentration_probe(model, 200, 5, 100, seed);
    for (int c = 0; c < 4; ++c) {
      small[c] += a.std_log[c] / 5.0;
      large[c] += b.std_log[c] / 5.0;
    }
  }
  for (int c = 0; c < 4; ++c) EXPECT_LE(large[c], small[c]) << "k=" << c + 2;
}
