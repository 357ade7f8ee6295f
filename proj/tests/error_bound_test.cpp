#include <cmath>

#include <gtest/gtest.h>

#include "lore/error_bound.hpp"
#include "lore/generators.hpp"

using namespace lore;

namespace {

SolverState make_state(std::vector<double> x) {
  SolverState s;
  s.x = x;
  s.x_prev = std::move(x);
  return s;
}

}  // namespace

TEST(Lipschitz, Examples) {
  const DynamicsConfig cfg;  // eta beta = 0.2
  EXPECT_DOUBLE_EQ(lipschitz_bound(Graph(5, {}), cfg), 1.0);
  const Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_NEAR(lipschitz_bound(star, cfg), 1.0 + 0.2 * std::sqrt(3.0), 1e-6);
  EXPECT_GE(lipschitz_bound(star, cfg), 1.0 + 0.2 * std::sqrt(3.0));
  // K4 is 3-regular, so the norm equals the max degree.
  const Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_NEAR(lipschitz_bound(k4, cfg), 1.6, 1e-9);
  EXPECT_LE(lipschitz_bound(k4, cfg), 1.6);
}

TEST(BoundReport, FullBudgetHasNoError) {
  const auto g = gen_er(200, 0.05, 1);
  DynamicsConfig cfg;
  cfg.steps = 40;
  BudgetConfig bc;
  bc.rho = 1.0;
  for (bool recall : {false, true}) {
    cfg.recall_enabled = recall;
    const auto rep = paired_trajectory_report(g, cfg, bc, 3);
    ASSERT_EQ(rep.e.size(), 41u);
    for (double v : rep.e) EXPECT_EQ(v, 0.0);
    for (double v : rep.delta) EXPECT_EQ(v, 0.0);
    for (double v : rep.eps_rho) EXPECT_EQ(v, 0.0);
    for (double v : rep.r) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(rep.unrolled_bound(), 0.0);
  }
}

TEST(BoundReport, RecursionAndDecompositionHold) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = seed % 2 == 0 ? gen_er(200, 0.05, seed) : gen_ba(200, 3, seed);
    for (double rho : {0.08, 0.3}) {
      for (bool recall : {false, true}) {
        DynamicsConfig cfg;
        cfg.steps = 60;
        cfg.recall_enabled = recall;
        BudgetConfig bc;
        bc.rho = rho;
        const auto rep = paired_trajectory_report(g, cfg, bc, seed + 50);
        EXPECT_TRUE(rep.violated_steps.empty()) << "seed " << seed << " rho " << rho << " recall " << recall;
        EXPECT_TRUE(rep.unrolled_violations.empty());
        EXPECT_EQ(rep.e.front(), 0.0);
        for (std::size_t t = 0; t < rep.delta.size(); ++t) {
          EXPECT_LE(rep.delta[t], rep.eps_rho[t] + rep.r[t] + 1e-9);
          EXPECT_LE(rep.e[t + 1], rep.L * rep.e[t] + rep.delta[t] + 1e-9);
          if (!recall) {
            EXPECT_EQ(rep.r[t], 0.0);
          }
        }
        EXPECT_LE(rep.e.back(), rep.unrolled_bound() * (1 + 1e-9) + 1e-12);
        EXPECT_LE(rep.unrolled_bound(), rep.geometric_bound() * (1 + 1e-9) + 1e-12);
      }
    }
  }
}

TEST(BoundReport, UnrolledBoundClosedForm) {
  BoundReport rep;
  rep.L = 2.0;
  rep.delta = {1.0, 0.5, 0.25};
  // 4*1 + 2*0.5 + 0.25
  EXPECT_DOUBLE_EQ(rep.unrolled_bound(), 5.25);
  EXPECT_DOUBLE_EQ(rep.unrolled_bound_at(1), 1.0);
  rep.eps_rho = {0.5, 1.0, 0.2};
  rep.r = {0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(rep.geometric_bound(), 7.0);
}

TEST(BoundReport, MismatchedInitialStatesRejected) {
  const auto g = gen_er(50, 0.1, 1);
  const auto a = init_state(50, 1);
  const auto b = init_state(50, 2);
  EXPECT_THROW((void)paired_trajectory_report(g, DynamicsConfig{}, BudgetConfig{}, a, b, 0), UsageError);
}

TEST(OmittedMass, ShrinksAsBudgetGrows) {
  const auto g = gen_er(200, 0.05, 4);
  SolverState x = init_state(200, 6);
  for (int t = 0; t < 5; ++t) x = full_step(x, g, DynamicsConfig{});
  const DynamicsConfig cfg;
  double prev = INFINITY;
  std::vector<char> prev_mask;
  for (double rho : {0.05, 0.2, 0.8}) {
    BudgetConfig bc;
    bc.rho = rho;
    Rng rng(0);
    const auto m = build_active_set(Strategy::LoRe, x, g, bc, nullptr, 0, rng);
    const double eps = omitted_message_mass(x, g, m, cfg);
    EXPECT_LE(eps, prev) << "rho " << rho;
    const auto mask = m.mask(g.num_edges());
    for (std::size_t i = 0; i < prev_mask.size(); ++i) {
      if (prev_mask[i]) {
        EXPECT_TRUE(mask[i]) << "active sets should be nested";
      }
    }
    prev = eps;
    prev_mask = mask;
  }
  EXPECT_EQ(omitted_message_mass(x, g, ActiveSet::full(g), cfg), 0.0);
}

TEST(Activity, Examples) {
  const Graph tri(3, {{0, 1}, {0, 2}, {1, 2}});
  const auto s = make_state({0.5, 0.5, 1.0});
  const auto st = activity_stats(s, ActiveSet(tri, {0}, {}, 0), tri);
  EXPECT_DOUBLE_EQ(st.cluster_mean_u, 1.0);
  ASSERT_TRUE(st.bath_mean_u.has_value());
  EXPECT_DOUBLE_EQ(*st.bath_mean_u, 0.0);
  EXPECT_FALSE(activity_stats(s, ActiveSet::full(tri), tri).bath_mean_u.has_value());
  const auto none = activity_stats(s, ActiveSet(tri, {}, {}, 0), tri);
  EXPECT_EQ(none.cluster_mean_u, 0.0);
  EXPECT_NEAR(*none.bath_mean_u, 1.0 / 3.0, 1e-15);
}
