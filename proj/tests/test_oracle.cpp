#include <gtest/gtest.h>

#include <cmath>

#include "bcnopt/errors.hpp"
#include "bcnopt/oracle.hpp"
#include "bcnopt/solvers.hpp"
#include "support.hpp"

using namespace bcnopt;
namespace ts = testing_support;

TEST(Enumerate, SingletonInputs) {
  const auto p = ts::make_problem(1, 1, {2, 1, 1, 2}, {1, 5, 3, 2}, ConstraintSpec{std::nullopt, {{1, {2}}, {2, {1}}}});
  EXPECT_EQ(oracle::policy_count(p.graph), 1u);
  const auto [v, pi] = oracle::enumerate_optimal(p.graph, 0.5);
  EXPECT_EQ(pi, (Policy{2, 1}));
  EXPECT_EQ(v, evaluate_policy_exact(p.graph, pi, 0.5));
}

TEST(Enumerate, TwoOptions) {
  const auto p = ts::two_option();
  EXPECT_EQ(oracle::policy_count(p.graph), 4u);
  const auto [v, pi] = oracle::enumerate_optimal(p.graph, 0.5);
  EXPECT_NEAR(v[0], 2.0, 1e-12);
  EXPECT_NEAR(v[1], 4.0, 1e-12);
  EXPECT_EQ(pi[0], 2u);
  const auto m = madani(p.graph, 0.5).values;
  EXPECT_LE(ts::max_abs_diff(v, m), 1e-12);
}

TEST(Enumerate, RefusesOverBudget) {
  const auto p = ts::two_option();
  oracle::OracleBudget budget;
  budget.max_policies = 3;
  EXPECT_THROW(oracle::enumerate_optimal(p.graph, 0.5, budget), OracleRefused);
}

TEST(TruncatedDp, OneStep) {
  const auto p = ts::two_option();
  const auto v = oracle::truncated_dp(p.assr, p.cost, p.region, 0.5, 1);
  EXPECT_EQ(v, (ValueTable{0.0, 2.0}));
}

TEST(TruncatedDp, SelfLoop) {
  const auto p = ts::self_loop(2.0);
  const auto v = oracle::truncated_dp(p.assr, p.cost, p.region, 0.5, 20);
  EXPECT_NEAR(v[0], 4.0 * (1 - std::pow(0.5, 20)), 1e-12);
}

TEST(TruncatedDp, RefusesDeepHorizon) {
  const auto p = ts::self_loop(2.0);
  oracle::OracleBudget budget;
  budget.max_horizon = 10;
  EXPECT_THROW(oracle::truncated_dp(p.assr, p.cost, p.region, 0.5, 11, budget), OracleRefused);
}

TEST(TruncatedDp, TailBoundHolds) {
  oracle::RandomNetworkOptions opts;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    opts.constrained = seed % 3 == 0;
    const auto p = ts::make_problem(oracle::random_network(seed, opts));
    const auto v = madani(p.graph, 0.6).values;
    const double g = stage_cost_bound(p.cost);
    for (std::size_t t : {1, 2, 5, 10, 30}) {
      const auto vt = oracle::truncated_dp(p.assr, p.cost, p.region, 0.6, t);
      EXPECT_LE(ts::max_abs_diff(vt, v), std::pow(0.6, t) * g / 0.4 + 1e-9) << "seed " << seed << " T=" << t;
    }
  }
}

TEST(RandomNetwork, Deterministic) {
  oracle::RandomNetworkOptions opts;
  opts.constrained = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_EQ(oracle::random_network(seed, opts), oracle::random_network(seed, opts));
  }
  EXPECT_FALSE(oracle::random_network(1, opts) == oracle::random_network(2, opts));
}

TEST(RandomNetwork, RespectsOptions) {
  oracle::RandomNetworkOptions opts;
  opts.constrained = true;
  bool negative = false;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto net = oracle::random_network(seed, opts);
    EXPECT_GE(net.num_states(), 1u);
    EXPECT_LE(net.num_states(), 3u);
    EXPECT_LE(net.num_inputs(), 2u);
    for (double g : std::get<TableCost>(net.cost).values) {
      EXPECT_EQ(g, std::round(g));
      EXPECT_GE(g, -5.0);
      EXPECT_LE(g, 5.0);
      negative = negative || g < 0;
    }
    EXPECT_FALSE(prune_region(build_assr(net), net.constraints).empty());
  }
  EXPECT_TRUE(negative);
}

TEST(Enumerate, AgreesWithMadaniOnRandomInstances) {
  oracle::RandomNetworkOptions opts;
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    opts.constrained = seed % 2 == 1;
    const auto p = ts::make_problem(oracle::random_network(seed, opts));
    const auto [v, pi] = oracle::enumerate_optimal(p.graph, 0.5);
    const auto m = madani(p.graph, 0.5).values;
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], m[i], 1e-9 * (1 + std::abs(m[i])));
    EXPECT_LE(ts::max_abs_diff(evaluate_policy_exact(p.graph, pi, 0.5), v), 1e-9);
  }
}
