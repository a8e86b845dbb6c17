#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "constructions.hpp"
#include "netclust/graphon.hpp"
#include "netclust/metrics.hpp"
#include "netclust/ncge.hpp"
#include "oracles.hpp"

using namespace netclust;

namespace {

DistanceMatrix exact_distances(const construct::Collection& c) {
  return frobenius_distance_matrix(std::span<const LinkProbMatrix>(c.exact));
}

std::vector<std::size_t> cluster_sizes(const std::vector<int>& labels, int k) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l - 1)];
  return counts;
}

}  // namespace

TEST(FrobeniusDistance, IdenticalMatricesGiveZero) {
  std::mt19937_64 rng(31);
  const LinkProbMatrix p(construct::random_probabilities(6, rng));
  const std::vector<LinkProbMatrix> ps{p, p, p};
  EXPECT_EQ(frobenius_distance_matrix(ps).values(), Matrix::Zero(3, 3));
}

TEST(FrobeniusDistance, TwoByTwo) {
  Matrix half(2, 2);
  half << 0, 0.5, 0.5, 0;
  const std::vector<LinkProbMatrix> ps{LinkProbMatrix(Matrix::Zero(2, 2)), LinkProbMatrix(half)};
  const auto d = frobenius_distance_matrix(ps);
  EXPECT_NEAR(d(0, 1), 0.70711, 1e-5);
  EXPECT_DOUBLE_EQ(d(0, 1), std::sqrt(0.5));
  EXPECT_EQ(d(1, 0), d(0, 1));
}

TEST(FrobeniusDistance, TriangleInequalityAndSymmetry) {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<LinkProbMatrix> ps;
    for (int i = 0; i < 3; ++i) ps.emplace_back(construct::random_probabilities(10, rng));
    const auto d = frobenius_distance_matrix(ps);
    EXPECT_LE(d(0, 2), d(0, 1) + d(1, 2) + 1e-9);
    EXPECT_LE(d(0, 1), d(0, 2) + d(2, 1) + 1e-9);
    EXPECT_LE(d(1, 2), d(1, 0) + d(0, 2) + 1e-9);
    EXPECT_EQ(d.values(), d.values().transpose());
  }
}

TEST(FrobeniusDistance, Preconditions) {
  const std::vector<LinkProbMatrix> one{LinkProbMatrix(Matrix::Zero(2, 2))};
  EXPECT_THROW(frobenius_distance_matrix(one), InputError);
  const std::vector<LinkProbMatrix> mixed{LinkProbMatrix(Matrix::Zero(2, 2)), LinkProbMatrix(Matrix::Zero(3, 3))};
  EXPECT_THROW(frobenius_distance_matrix(mixed), InputError);
}

TEST(FrobeniusDistance, IndependentOfJobCount) {
  std::mt19937_64 rng(33);
  std::vector<LinkProbMatrix> ps;
  for (int i = 0; i < 9; ++i) ps.emplace_back(construct::random_probabilities(20, rng));
  EXPECT_EQ(frobenius_distance_matrix(ps, 1).values(), frobenius_distance_matrix(ps, 4).values());
}

TEST(SpectralClusterDistance, ExactTwoGraphonRecovery) {
  construct::Collection c;
  for (int i = 0; i < 6; ++i) {
    c.exact.emplace_back(construct::planted_matrix(30, i < 3 ? 0.4 : 0.3, 0.1, 2));
    c.labels.push_back(i < 3 ? 1 : 2);
  }
  const auto a = spectral_cluster_distance(exact_distances(c), 2, 1);
  EXPECT_EQ(clustering_error(a.labels, c.labels, 2), 0.0);
}

TEST(SpectralClusterDistance, ExactRecoveryOnRandomBlockCollections) {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rep % 2;
    const auto c = construct::block_collection(k, 12, 24, rng);
    const auto a = spectral_cluster_distance(exact_distances(c), k, static_cast<std::uint64_t>(rep));
    EXPECT_EQ(clustering_error(a.labels, c.labels, k), 0.0) << rep;
  }
}

TEST(SpectralClusterDistance, ZeroMatrixIsDeterministic) {
  const DistanceMatrix d(Matrix::Zero(5, 5));
  EXPECT_EQ(spectral_cluster_distance(d, 2, 7).labels, spectral_cluster_distance(d, 2, 7).labels);
}

TEST(SpectralClusterDistance, SmallPerturbationStillRecovers) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.0, 0.01);
  std::vector<int> truth;
  for (int i = 0; i < 10; ++i) truth.push_back(i % 2 + 1);
  Matrix d(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = i; j < 10; ++j) {
      d(i, j) = d(j, i) = (i == j) ? 0.0 : (truth[i] == truth[j] ? 0.0 : 1.0) + u(rng);
    }
  }
  const auto a = spectral_cluster_distance(DistanceMatrix(d), 2, 3);
  EXPECT_EQ(clustering_error(a.labels, truth, 2), 0.0);
}

TEST(SpectralClusterDistance, ReorderingGraphsPermutesLabels) {
  std::mt19937_64 rng(36);
  const auto c = construct::block_collection(3, 15, 20, rng);
  const auto base = construct::perturb_all(c.exact, 0.05, rng);
  const auto perm = oracle::random_permutation(15, rng);
  std::vector<LinkProbMatrix> shuffled(15);
  for (std::size_t i = 0; i < 15; ++i) shuffled[perm[i]] = base[i];
  const auto a = spectral_cluster_distance(frobenius_distance_matrix(base), 3, 5);
  const auto b = spectral_cluster_distance(frobenius_distance_matrix(shuffled), 3, 5);
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) {
      EXPECT_EQ(a.labels[i] == a.labels[j], b.labels[perm[i]] == b.labels[perm[j]]);
    }
  }
}

TEST(SpectralClusterDistance, RejectsKAboveT) {
  EXPECT_THROW(spectral_cluster_distance(DistanceMatrix(Matrix::Zero(3, 3)), 4, 1), InputError);
}

TEST(NcgePipeline, TwoGraphsTwoClustersAreSingletons) {
  const auto model = Graphon::planted_partition(0.5, 0.1, 2);
  const std::vector<Graph> gs{sample_graphon(model, 40, 1), sample_graphon(model.with_rho(0.3), 40, 2)};
  const auto r = ncge_pipeline(gs, Estimator::naive, 2, 1);
  EXPECT_NE(r.assignment.labels[0], r.assignment.labels[1]);
  EXPECT_EQ(r.assignment.method, "ncge-naive");
}

TEST(NcgePipeline, IdenticalGraphsAreDeterministic) {
  const auto g = sample_graphon(Graphon::planted_partition(0.5, 0.1, 2), 40, 1);
  const std::vector<Graph> gs(5, g);
  EXPECT_EQ(ncge_pipeline(gs, Estimator::usvt, 2, 9).assignment.labels,
            ncge_pipeline(gs, Estimator::usvt, 2, 9).assignment.labels);
}

TEST(NcgePipeline, MixedSizesNeedNodeCorrespondence) {
  const auto model = Graphon::planted_partition(0.5, 0.1, 2);
  const std::vector<Graph> gs{sample_graphon(model, 40, 1), sample_graphon(model, 41, 2)};
  try {
    ncge_pipeline(gs, Estimator::nbs, 2, 1);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("node correspondence required"), std::string::npos);
  }
}

TEST(NcgePipeline, CommonNodePermutationLeavesDistancesUnchanged) {
  std::mt19937_64 rng(37);
  const auto model = Graphon::planted_partition(0.4, 0.1, 2, 0.7);
  std::vector<Graph> gs, permuted;
  const auto perm = oracle::random_permutation(60, rng);
  for (std::uint64_t s = 1; s <= 4; ++s) {
    gs.push_back(sample_graphon(model, 60, s));
    permuted.push_back(gs.back().permuted(perm));
  }
  for (auto which : {Estimator::usvt, Estimator::nbs, Estimator::naive}) {
    const auto a = frobenius_distance_matrix(estimate_all(gs, which));
    const auto b = frobenius_distance_matrix(estimate_all(permuted, which));
    EXPECT_LE((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-9) << to_string(which);
  }
}

TEST(ConsistencyInequality, HoldsOnRandomCollections) {
  // ||D_hat - D||_F^2 <= 4 T sum_i ||P_hat_i - P_i||_F^2
  std::mt19937_64 rng(38);
  for (int rep = 0; rep < 100; ++rep) {
    const int t = std::uniform_int_distribution<int>(2, 10)(rng);
    const auto n = std::uniform_int_distribution<Eigen::Index>(2, 50)(rng);
    std::vector<LinkProbMatrix> exact, hat;
    for (int i = 0; i < t; ++i) {
      exact.emplace_back(construct::random_probabilities(n, rng));
      hat.emplace_back(construct::perturbed(exact.back().values(), 0.3, rng));
    }
    const double lhs = (frobenius_distance_matrix(hat).values() - frobenius_distance_matrix(exact).values()).squaredNorm();
    const double rhs = 4.0 * t * construct::sum_squared_error(hat, exact);
    EXPECT_LE(lhs, rhs + 1e-9) << rep;
  }
}

TEST(DavisKahan, IdenticalInputsGiveZero) {
  std::mt19937_64 rng(39);
  const auto d = exact_distances(construct::block_collection(2, 8, 16, rng));
  const auto r = davis_kahan_check(d, d, 2);
  EXPECT_NEAR(r.lhs, 0.0, 1e-20);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(DavisKahan, GammaForTwoEqualGroups) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int rep = 0; rep < 10; ++rep) {
    const int m = 1 + rep % 3;
    const Eigen::Index n = 12 * m;
    const int t = 2 * (2 + rep);
    const double p = u(rng), q = u(rng), p2 = u(rng), q2 = u(rng);
    construct::Collection c;
    for (int i = 0; i < t; ++i) {
      c.exact.emplace_back(i % 2 ? construct::planted_matrix(n, p, q, m) : construct::planted_matrix(n, p2, q2, m));
    }
    const double d = std::sqrt(blockmodel_separation_d2(p, q, p2, q2, m));
    const auto r = davis_kahan_check(exact_distances(c), exact_distances(c), 2);
    EXPECT_NEAR(r.gamma, t * static_cast<double>(n) * d / 2.0, 1e-9) << rep;
  }
}

TEST(DavisKahan, BoundHoldsUnderPerturbation) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const auto c = construct::block_collection(2, 10, 20, rng);
    const auto hat = construct::perturb_all(c.exact, 0.02 * (1 + rep % 10), rng);
    const auto r = davis_kahan_check(exact_distances(c), frobenius_distance_matrix(hat), 2);
    EXPECT_LE(r.lhs, r.rhs) << rep;
    EXPECT_LE(r.lhs, chained_eigenvector_bound(r.gamma, 10, construct::sum_squared_error(hat, c.exact))) << rep;
  }
}

TEST(DavisKahan, RejectsRankDeficientPopulation) {
  const DistanceMatrix zero(Matrix::Zero(4, 4));
  EXPECT_THROW(davis_kahan_check(zero, zero, 1), NumericError);
  EXPECT_THROW(davis_kahan_check(zero, DistanceMatrix(Matrix::Zero(3, 3)), 1), InputError);
}

TEST(Separation, ClosedFormExamples) {
  EXPECT_DOUBLE_EQ(blockmodel_separation_d2(0.3, 0.9, 0.1, 0.2, 1), (0.3 - 0.1) * (0.3 - 0.1));
  EXPECT_NEAR(blockmodel_separation_d2(0.3, 0.3, 0.1, 0.1, 4), (0.3 - 0.1) * (0.3 - 0.1), 1e-15);
  EXPECT_NEAR(blockmodel_separation_d2(0.1, 0.05, 0.11, 0.055, 2), 6.25e-5, 1e-18);
  EXPECT_THROW(blockmodel_separation_d2(0.1, 0.05, 0.11, 0.055, 0), InputError);
  EXPECT_THROW(blockmodel_separation_d2(1.1, 0.05, 0.11, 0.055, 2), InputError);
}

TEST(Separation, MatchesNormalizedFrobeniusDistance) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u;
  for (int m = 1; m <= 5; ++m) {
    const Eigen::Index n = 60;
    const double p = u(rng), q = u(rng), p2 = u(rng), q2 = u(rng);
    const double direct =
        (construct::planted_matrix(n, p, q, m) - construct::planted_matrix(n, p2, q2, m)).squaredNorm() / (n * n);
    EXPECT_NEAR(direct, blockmodel_separation_d2(p, q, p2, q2, m), 1e-12) << m;
  }
}

TEST(MisclusteringBound, ZeroWithoutPerturbation) {
  std::mt19937_64 rng(43);
  const auto c = construct::block_collection(2, 8, 16, rng);
  const auto d = exact_distances(c);
  EXPECT_NEAR(misclustering_bound(d, d, 2, cluster_sizes(c.labels, 2)), 0.0, 1e-18);
}

TEST(MisclusteringBound, CoversObservedMistakes) {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 20; ++rep) {
    construct::Collection c;
    const double p = 0.3, q = 0.1;
    for (int i = 0; i < 10; ++i) {
      c.exact.emplace_back(construct::planted_matrix(20, i < 5 ? p : p + 0.05, q, 2));
      c.labels.push_back(i < 5 ? 1 : 2);
    }
    const auto hat = construct::perturb_all(c.exact, 0.3, rng);
    const auto d_hat = frobenius_distance_matrix(hat);
    const auto a = spectral_cluster_distance(d_hat, 2, static_cast<std::uint64_t>(rep));
    const double mistakes = 10.0 * clustering_error(a.labels, c.labels, 2);
    EXPECT_GE(misclustering_bound(exact_distances(c), d_hat, 2, cluster_sizes(c.labels, 2)), mistakes) << rep;
  }
}

TEST(MisclusteringBound, LinearInLargestCluster) {
  const std::vector<std::size_t> counts{3, 5}, doubled{3, 10};
  EXPECT_DOUBLE_EQ(misclustering_bound(0.25, doubled), 2.0 * misclustering_bound(0.25, counts));
  EXPECT_DOUBLE_EQ(misclustering_bound(0.25, counts), 8.0 * 5 * 0.25);
  EXPECT_THROW(misclustering_bound(0.25, std::vector<std::size_t>{}), InputError);
}
