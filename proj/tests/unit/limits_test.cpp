#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "lwpr/error.hpp"
#include "lwpr/limits.hpp"
#include "lwpr/tails.hpp"
#include "oracles.hpp"

using namespace lwpr;

namespace {

BiDegreeLaw uniform3() {
  const std::vector<double> pmf{0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  return BiDegreeLaw::independent(pmf, pmf);
}

// Two-level tree: root with children 1 (mark 2) and 2 (mark 1); node 1 has child 3 (mark 3).
LimitTree hand_tree() {
  LimitTree t;
  t.add_node(LimitTree::kNone, 1, 2);
  t.add_node(0, 2, 1);
  t.add_node(0, 1, 0);
  t.add_node(1, 3, 0);
  t.depth_limit = LimitTree::kNone;
  return t;
}

}  // namespace

TEST(Malthusian, ClosedForms) {
  EXPECT_NEAR(malthusian(1.0), 2.0, 1e-9);
  EXPECT_NEAR(malthusian(1.5), 2.5, 1e-9);
  for (double alpha : {1.2, 2.0, 3.7}) {
    for (double theta : {0.3, 1.0, 2.5}) EXPECT_NEAR(malthusian_mean(alpha, theta), theta / (alpha - 1.0), 1e-9);
  }
  EXPECT_THROW(malthusian(0.0), ConfigError);
  EXPECT_THROW(malthusian(-1.0), ConfigError);
}

TEST(Malthusian, DefiningEquation) {
  RngStream rng(1, 9);
  for (int i = 0; i < 50; ++i) {
    const double theta = 0.1 + 4.9 * rng.uniform();
    const double tol = 1e-12;
    const double alpha = malthusian(theta, tol);
    EXPECT_LT(std::abs(malthusian_mean(alpha, theta) - 1.0), 10 * tol);
    EXPECT_NEAR(alpha, 1.0 + theta, 1e-8);
  }
}

TEST(GwLimit, UnitLawIsAPath) {
  RngStream rng(2, 1);
  for (std::uint32_t N : {0u, 1u, 5u}) {
    auto t = sample_gw_limit(BiDegreeLaw::point(1, 1), N, rng);
    t.validate();
    EXPECT_EQ(t.size(), N + 1u);
    EXPECT_EQ(t.height(), N);
    for (double c : {0.5, 0.85}) {
      EXPECT_NEAR(root_pagerank(t, c, N), 1.0 - std::pow(c, N + 1), 1e-14);
    }
  }
}

TEST(GwLimit, TruncationAndShape) {
  RngStream rng(2, 2);
  auto law = uniform3();
  for (int i = 0; i < 200; ++i) {
    auto t = sample_gw_limit(law, 3, rng);
    t.validate();
    for (std::size_t v = 0; v < t.size(); ++v) {
      EXPECT_LE(t.depth[v], 3u);
      EXPECT_GE(t.mark[v], 1u);
      if (t.depth[v] < 3) EXPECT_EQ(t.child_count[v], t.in_degree[v]);
      else EXPECT_EQ(t.child_count[v], 0u);
    }
  }
}

TEST(GwLimit, NonRootMarksAreSizeBiased) {
  BiDegreeLaw law({{1, 2, 0.5}, {2, 1, 0.5}});
  RngStream rng(2, 3);
  double root_two = 0, child_two = 0, children = 0;
  const int M = 40'000;
  for (int i = 0; i < M; ++i) {
    auto t = sample_gw_limit(law, 1, rng);
    root_two += t.mark[0] == 2;
    for (std::size_t v = 1; v < t.size(); ++v) {
      child_two += t.mark[v] == 2;
      children += 1;
    }
  }
  EXPECT_NEAR(root_two / M, 0.5, 3 * std::sqrt(0.25 / M));
  EXPECT_NEAR(child_two / children, 2.0 / 3.0, 3 * std::sqrt(2.0 / 9.0 / children));
}

TEST(GwLimit, MeanIdentity) {
  auto law = uniform3();
  auto biased = law.size_biased();
  const double c = 0.5;
  const std::uint32_t N = 6;
  auto pool = sample_pool(100'000, RngStream(3, streams::kLimits), 1, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, N, r, t);
    return root_pagerank(t, c, N);
  });
  auto ms = testing_helpers::mean_se(pool);
  EXPECT_NEAR(ms.mean, 1.0 - std::pow(c, N + 1), 3 * ms.se);
}

TEST(GwLimit, DanglingMassLowersTheMean) {
  BiDegreeLaw law({{0, 2, 0.25}, {2, 1, 0.5}, {1, 1, 0.25}});
  auto biased = law.size_biased();
  const double c = 0.85;
  auto pool = sample_pool(50'000, RngStream(3, 7), 1, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, 5, r, t);
    return root_pagerank(t, c, 5);
  });
  auto ms = testing_helpers::mean_se(pool);
  EXPECT_LE(ms.mean, 1.0 + 3 * ms.se);
  EXPECT_LT(ms.mean, 1.0 - std::pow(c, 6));
}

TEST(RootPagerank, RootOnlyAndErrors) {
  LimitTree t;
  t.add_node(LimitTree::kNone, 3, 0);
  EXPECT_DOUBLE_EQ(root_pagerank(t, 0.85), 0.15);
  EXPECT_DOUBLE_EQ(root_pagerank(t, 0.3, 0), 0.7);
  RngStream rng(4, 1);
  auto trunc = sample_gw_limit(uniform3(), 2, rng);
  EXPECT_THROW(root_pagerank(trunc, 0.5, 3), UsageError);
  EXPECT_THROW(root_pagerank(trunc, 0.5), UsageError);
  EXPECT_THROW(root_pagerank(LimitTree{}, 0.5, 0), UsageError);
}

TEST(RootPagerank, MatchesPathEnumeration) {
  RngStream rng(4, 2);
  BiDegreeLaw law({{1, 0, 0.2}, {1, 3, 0.2}, {2, 1, 0.2}, {3, 2, 0.2}, {4, 2, 0.2}}, 1.0);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t N = static_cast<std::uint32_t>(rng.below(4));
    auto t = sample_gw_limit(law, N, rng);
    for (double c : {0.5, 0.85}) {
      for (std::uint32_t j = 0; j <= N; ++j) {
        EXPECT_NEAR(root_pagerank(t, c, j), oracle::tree_path_sum(t, c, j), 1e-12);
      }
    }
  }
}

TEST(RootPagerank, MonotoneInNAndLowerBound) {
  RngStream rng(4, 3);
  auto law = uniform3();
  for (int i = 0; i < 300; ++i) {
    auto t = sample_gw_limit(law, 6, rng);
    const double c = 0.85;
    double prev = 0.0;
    for (std::uint32_t N = 0; N <= 6; ++N) {
      const double r = root_pagerank(t, c, N);
      EXPECT_GE(r, prev);
      prev = r;
    }
    double inv = 0.0;
    for (std::size_t u = t.first_child[0]; u < t.first_child[0] + t.child_count[0]; ++u) inv += 1.0 / t.mark[u];
    for (std::uint32_t N = 1; N <= 6; ++N) {
      EXPECT_GE(root_pagerank(t, c, N), (1 - c) * (1 + c * inv) - 1e-15);
    }
  }
}

TEST(RootPagerank, Generalized) {
  auto t = hand_tree();
  EXPECT_THROW(root_pagerank_generalized(t, 2), UsageError);
  t.C = {0.1, 0.5, 0.4, 0.6};
  t.B = {1.0, 2.0, 3.0, 4.0};
  // R3 = 4; R1 = 2 + 0.6/3 * 4 = 2.8; R2 = 3; R0 = 1 + 0.5/2 * 2.8 + 0.4/1 * 3 = 2.9
  EXPECT_NEAR(root_pagerank_generalized(t, 2), 2.9, 1e-15);
  EXPECT_NEAR(root_pagerank_generalized(t, 1), 1 + 0.25 * 2 + 0.4 * 3, 1e-15);
  EXPECT_NEAR(root_pagerank_generalized(t, 0), 1.0, 1e-15);
  t.C[2] = 1.0;
  EXPECT_THROW(root_pagerank_generalized(t, 2), ConfigError);
}

TEST(RootPagerank, GeneralizedReductionAndPathSum) {
  RngStream rng(4, 4);
  auto law = uniform3();
  for (int i = 0; i < 100; ++i) {
    auto t = sample_gw_limit(law, 3, rng);
    const double c = 0.6;
    assign_weights(t, ScalarLaw::constant(c), ScalarLaw::constant(1 - c), rng);
    EXPECT_NEAR(root_pagerank_generalized(t, 3), root_pagerank(t, c, 3), 1e-13);
    assign_weights(t, ScalarLaw::constant(0.0), ScalarLaw::exponential(0.15), rng);
    EXPECT_DOUBLE_EQ(root_pagerank_generalized(t, 3), t.B[0]);
    assign_weights(t, ScalarLaw::uniform(0, 0.85), ScalarLaw::exponential(0.15), rng);
    auto C = [&](std::size_t v) { return t.C[v]; };
    auto B = [&](std::size_t v) { return t.B[v]; };
    EXPECT_NEAR(root_pagerank_generalized(t, 3), oracle::tree_path_sum(t, 3, C, B), 1e-12);
  }
  auto t = sample_gw_limit(law, 1, rng);
  EXPECT_THROW(assign_weights(t, ScalarLaw::uniform(0, 1.0), ScalarLaw::constant(1), rng), ConfigError);
}

TEST(CtbpLimit, RootOnlyProbabilityAndHorizon) {
  const double theta = 1.0, alpha = malthusian(theta);
  RngStream rng(5, 1);
  const int M = 50'000;
  int root_only = 0;
  std::vector<double> horizons;
  for (int i = 0; i < M; ++i) {
    auto t = sample_ctbp_limit(theta, alpha, rng);
    root_only += t.size() == 1;
    horizons.push_back(t.horizon);
    for (double b : t.birth_time) EXPECT_LT(b, t.horizon);
  }
  const double p = alpha / (alpha + theta);
  EXPECT_NEAR(static_cast<double>(root_only) / M, p, 3 * std::sqrt(p * (1 - p) / M));
  auto ms = testing_helpers::mean_se(horizons);
  EXPECT_NEAR(ms.mean, 1.0 / alpha, 3 * ms.se);
}

TEST(CtbpLimit, GenerationFormula) {
  RngStream rng(5, 2);
  for (int i = 0; i < 500; ++i) {
    auto t = sample_ctbp_limit(1.0, 2.0, rng);
    t.validate();
    EXPECT_EQ(t.mark[0], 1u);
    EXPECT_TRUE(t.complete());
    auto Z = t.generation_sizes();
    for (std::uint32_t N : {0u, 2u, 5u}) {
      double expected = 0.0;
      for (std::size_t k = 0; k <= N && k < Z.size(); ++k) expected += 0.3 * std::pow(0.7, k) * Z[k];
      const double got = t.height() >= N ? root_pagerank(t, 0.7, N) : root_pagerank(t, 0.7);
      EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, expected));
    }
  }
}

TEST(CtbpLimit, NodeCap) {
  RngStream rng(5, 3);
  // alpha far below the Malthusian value gives huge trees
  EXPECT_THROW(
      {
        for (int i = 0; i < 1000; ++i) sample_ctbp_limit(1.0, 0.05, rng, 1000);
      },
      ResourceError);
}

TEST(PolyaLimit, Validation) {
  RngStream rng(6, 1);
  EXPECT_THROW(sample_polya_limit({1, 0.0}, 2, rng), ConfigError);
  EXPECT_THROW(sample_polya_limit({2, -2.0}, 2, rng), ConfigError);
  PolyaParams p{2, 1.0};
  EXPECT_DOUBLE_EQ(p.chi(), 0.6);
  EXPECT_NEAR(p.psi(), 2.0 / 3.0, 1e-15);
}

TEST(PolyaLimit, RootPositionLaw) {
  PolyaParams p{2, 1.0};
  RngStream rng(6, 2);
  const int M = 40'000;
  std::vector<double> xs;
  for (int i = 0; i < M; ++i) xs.push_back(sample_polya_limit(p, 0, rng).position[0]);
  auto sample = TailSample::from(xs);
  for (double t : {0.1, 0.3, 0.5, 0.8}) {
    const double F = std::pow(t, 1.0 / p.chi());
    const double emp = 1.0 - ccdf(sample, std::vector<double>{t})[0];
    EXPECT_NEAR(emp, F, 3 * std::sqrt(F * (1 - F) / M));
  }
}

TEST(PolyaLimit, ChildCountGivenPosition) {
  for (Count m : {2u, 3u}) {
    PolyaParams p{m, 0.0};
    p.root_position = 0.25;
    RngStream rng(6, 3 + m);
    std::vector<double> counts;
    for (int i = 0; i < 40'000; ++i) counts.push_back(sample_polya_limit(p, 1, rng).in_degree[0]);
    auto ms = testing_helpers::mean_se(counts);
    EXPECT_NEAR(ms.mean, 3.0 * m, 3 * ms.se);
  }
}

TEST(PolyaLimit, PositionsIncreaseAlongPaths) {
  PolyaParams p{2, 1.0};
  RngStream rng(6, 6);
  for (int i = 0; i < 300; ++i) {
    auto t = sample_polya_limit(p, 4, rng);
    t.validate();
    ASSERT_EQ(t.position.size(), t.size());
    ASSERT_EQ(t.strength.size(), t.size());
    for (std::size_t v = 1; v < t.size(); ++v) {
      EXPECT_GT(t.position[v], t.position[t.parent[v]]);
      EXPECT_LE(t.position[v], 1.0);
      EXPECT_EQ(t.mark[v], 2u);
    }
  }
}

TEST(MeanBound, EveryLimitLaw) {
  const double c = 0.85;
  auto check = [](const std::vector<double>& pool) {
    auto ms = testing_helpers::mean_se(pool);
    EXPECT_LE(ms.mean, 1.0 + 3 * ms.se);
  };
  auto law = uniform3();
  auto biased = law.size_biased();
  check(sample_pool(20'000, RngStream(7, 1), 1, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, 8, r, t);
    return root_pagerank(t, c, 8);
  }));
  const double alpha = malthusian(1.0);
  check(sample_pool(20'000, RngStream(7, 2), 1, [&](RngStream& r, LimitTree& t) {
    sample_ctbp_limit(1.0, alpha, r, t);
    return root_pagerank(t, c, std::min<std::uint32_t>(t.height(), 8));
  }));
  PolyaParams p{2, 1.0};
  check(sample_pool(20'000, RngStream(7, 3), 1, [&](RngStream& r, LimitTree& t) {
    sample_polya_limit(p, 5, r, t);
    return root_pagerank(t, c, 5);
  }));
}

TEST(FixedPoint, DeterministicLaws) {
  FixedPointParams p{BiDegreeLaw::point(1, 1), 0.5, 12, 1000};
  auto pool = solve_fixed_point_mc(p, RngStream(8, 1));
  for (double r : pool) EXPECT_NEAR(r, 1.0 - std::pow(0.5, 13), 1e-15);
  p.K = 60;
  for (double r : solve_fixed_point_mc(p, RngStream(8, 1))) EXPECT_NEAR(r, 1.0, 1e-15);

  FixedPointParams leaves{BiDegreeLaw({{1, 0, 1.0}}, 1.0), 0.85, 5, 1000};
  for (double r : solve_fixed_point_mc(leaves, RngStream(8, 2))) EXPECT_DOUBLE_EQ(r, 0.15);
}

TEST(FixedPoint, MatchesGwSampler) {
  const std::uint32_t K = 5;
  const double c = 0.5;
  const std::size_t M = 100'000;
  auto law = uniform3();
  auto biased = law.size_biased();
  FixedPointParams p{law, c, K, M};
  auto fp = TailSample::from(solve_fixed_point_mc(p, RngStream(8, 3)));
  auto gw = TailSample::from(sample_pool(M, RngStream(8, 4), 1, [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, K, r, t);
    return root_pagerank(t, c, K);
  }));
  EXPECT_LT(ks_distance(fp, gw), 0.01);
}

TEST(FixedPoint, ThreadInvariantAndValidated) {
  FixedPointParams p{uniform3(), 0.85, 4, 5000};
  auto one = solve_fixed_point_mc(p, RngStream(8, 5));
  p.threads = 3;
  EXPECT_EQ(one, solve_fixed_point_mc(p, RngStream(8, 5)));
  p.c = 1.0;
  EXPECT_THROW(solve_fixed_point_mc(p, RngStream(8, 5)), ConfigError);
  p.c = 0.5;
  p.C = ScalarLaw::uniform(0, 0.85);
  EXPECT_THROW(solve_fixed_point_mc(p, RngStream(8, 5)), ConfigError);
}

TEST(SamplePool, ThreadInvariant) {
  auto law = uniform3();
  auto biased = law.size_biased();
  auto fn = [&](RngStream& r, LimitTree& t) {
    sample_gw_limit(law, biased, 3, r, t);
    return root_pagerank(t, 0.85, 3);
  };
  EXPECT_EQ(sample_pool(5000, RngStream(9, 1), 1, fn), sample_pool(5000, RngStream(9, 1), 4, fn));
}

TEST(LimitTree, ExportsAsGraph) {
  auto t = hand_tree();
  auto g = to_graph(t);
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.multiplicity(3, 1), 1u);
  EXPECT_EQ(g.multiplicity(1, 0), 1u);
  auto nb = to_neighborhood(t, 1);
  EXPECT_EQ(nb.nodes.size(), 3u);
  EXPECT_TRUE(is_in_tree(nb));
  EXPECT_EQ(nb.nodes[1].mark, 2u);
}
