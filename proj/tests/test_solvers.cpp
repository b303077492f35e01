#include <gtest/gtest.h>

#include <cmath>

#include "bcnopt/errors.hpp"
#include "bcnopt/io.hpp"
#include "bcnopt/oracle.hpp"
#include "bcnopt/solvers.hpp"
#include "support.hpp"

using namespace bcnopt;
namespace ts = testing_support;

namespace {

SolverConfig config(double theta, SweepOrder order = SweepOrder::GaussSeidel) {
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.theta = theta;
  cfg.order = order;
  return cfg;
}

// Problems used by the property tests: random small networks, half of them
// constrained.
std::vector<ts::Problem> random_problems(std::size_t count, std::uint64_t first_seed = 1) {
  std::vector<ts::Problem> out;
  oracle::RandomNetworkOptions opts;
  for (std::uint64_t seed = first_seed; out.size() < count; ++seed) {
    opts.constrained = seed % 2 == 0;
    opts.max_state_vars = 3 + seed % 2;
    out.push_back(ts::make_problem(oracle::random_network(seed, opts)));
  }
  return out;
}

}  // namespace

TEST(ValueIteration, SelfLoop) {
  const auto p = ts::self_loop(2.0);
  const auto r = value_iteration(p.graph, config(1e-9));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.values[0], 4.0, 1e-8);
  EXPECT_EQ(r.residuals.size(), r.iterations);
}

TEST(ValueIteration, ForcedCycle) {
  const auto p = ts::make_problem(1, 0, {2, 1}, {1.0, 3.0});
  for (auto order : {SweepOrder::GaussSeidel, SweepOrder::Jacobi}) {
    const auto r = value_iteration(p.graph, config(1e-12, order));
    EXPECT_NEAR(r.values[0], 10.0 / 3.0, 1e-10);
    EXPECT_NEAR(r.values[1], 14.0 / 3.0, 1e-10);
  }
}

TEST(ValueIteration, RawTableOverloadAgrees) {
  for (const auto& p : random_problems(10)) {
    const auto a = value_iteration(p.graph, config(1e-10));
    const auto b = value_iteration(p.assr, p.cost, p.region, config(1e-10));
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_LT(ts::max_abs_diff(a.values, b.values), 1e-12);
  }
}

TEST(ValueIteration, IterationCap) {
  const auto p = ts::self_loop(2.0);
  SolverConfig cfg = config(0.0);
  cfg.max_iterations = 5;
  const auto r = value_iteration(p.graph, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
  EXPECT_NEAR(r.values[0], 2.0 * (1 - std::pow(0.5, 5)) / 0.5, 1e-12);
}

TEST(ValueIteration, InitialValues) {
  const auto p = ts::self_loop(2.0);
  const ValueTable start{4.0};
  const auto r = value_iteration(p.graph, config(1e-9), &start);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.values[0], 4.0);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  cfg.lambda = 1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.lambda = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.lambda = 0.5;
  cfg.theta = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.theta = 0;
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Madani, SingleVertex) {
  const auto p = ts::self_loop(2.0);
  const auto r = madani(p.graph, 0.5, true);
  ASSERT_TRUE(r.workspace.has_value());
  EXPECT_EQ(r.workspace->d[1][0], 2.0);
  EXPECT_EQ(r.workspace->y[0][0], 4.0);
  EXPECT_EQ(r.values[0], 4.0);
}

TEST(Madani, TwoOptions) {
  const auto p = ts::two_option();
  const auto v = madani(p.graph, 0.5).values;
  EXPECT_NEAR(v[0], 2.0, 1e-12);
  EXPECT_NEAR(v[1], 4.0, 1e-12);
  const Policy pi = extract_policy(p.graph, v, 0.5);
  EXPECT_EQ(pi[0], 2u);
}

TEST(Madani, WorkspaceMatchesRollingRows) {
  for (const auto& p : random_problems(10)) {
    const auto full = madani(p.graph, 0.7, true);
    const auto lean = madani(p.graph, 0.7, false);
    EXPECT_EQ(full.values, lean.values);
    EXPECT_FALSE(lean.workspace.has_value());
    EXPECT_EQ(full.workspace->d.size(), p.graph.size() + 1);
    EXPECT_EQ(full.workspace->y.size(), p.graph.size());
  }
}

TEST(Madani, ThreadCountDoesNotChangeResults) {
  const auto p = ts::make_problem(load_network(std::filesystem::path(BCNOPT_DATA_DIR) / "ara_operon.json"));
  const auto one = madani(p.graph, 0.5, false, 1).values;
  const auto four = madani(p.graph, 0.5, false, 4).values;
  EXPECT_EQ(one, four);
}

TEST(Policy, SingletonInputs) {
  // Every state has exactly one admissible input.
  const auto p = ts::make_problem(1, 1, {2, 1, 1, 2}, {1, 1, 1, 1},
                                  ConstraintSpec{std::nullopt, {{1, {2}}, {2, {1}}}});
  for (const ValueTable& v : {ValueTable{0, 0}, ValueTable{-100, 100}, ValueTable{7, -3}}) {
    const Policy pi = extract_policy(p.graph, v, 0.5);
    EXPECT_EQ(pi, (Policy{2, 1}));
  }
}

TEST(Policy, ExactEvaluationOfChain) {
  // 1 -> 2 -> 3 -> 3 with costs 1, 2, 4.
  ConstraintSpec c;
  c.allowed_states = std::vector<std::size_t>{1, 2, 3};
  const auto p = ts::make_problem(2, 0, {2, 3, 3, 4}, {1, 2, 4, 0}, c);
  const ValueTable v = evaluate_policy_exact(p.graph, Policy{1, 1, 1}, 0.5);
  EXPECT_DOUBLE_EQ(v[2], 8.0);
  EXPECT_DOUBLE_EQ(v[1], 6.0);
  EXPECT_DOUBLE_EQ(v[0], 4.0);
}

TEST(Policy, ConstantCostCycle) {
  // 3-cycle 1 -> 2 -> 3 -> 1 (state 4 excluded), cost 1.5 everywhere.
  ConstraintSpec c;
  c.allowed_states = std::vector<std::size_t>{1, 2, 3};
  const auto p = ts::make_problem(2, 0, {2, 3, 1, 4}, {1.5, 1.5, 1.5, 1.5}, c);
  const ValueTable v = evaluate_policy_exact(p.graph, Policy{1, 1, 1}, 0.75);
  for (double x : v) EXPECT_NEAR(x, 1.5 / 0.25, 1e-12);
}

TEST(Feedback, Transcription) {
  // N = 4, M = 2, only state 1 admissible, policy picks input 2.
  ConstraintSpec c;
  c.allowed_states = std::vector<std::size_t>{1};
  const auto p = ts::make_problem(2, 1, {2, 1, 1, 1, 1, 1, 1, 1}, std::vector<double>(8, 0.0), c);
  ASSERT_EQ(p.graph.size(), 1u);
  const LogicalMatrix k = feedback_matrix(p.graph, Policy{2});
  EXPECT_EQ(k, LogicalMatrix(2, {2, 1, 1, 1}));
}

TEST(Feedback, IdentityOnRandomInstances) {
  for (const auto& p : random_problems(20)) {
    const auto v = madani(p.graph, 0.5).values;
    const Policy pi = extract_policy(p.graph, v, 0.5);
    const LogicalMatrix k = feedback_matrix(p.graph, pi);
    EXPECT_EQ(k.rows(), p.assr.input_count());
    EXPECT_EQ(k.cols(), p.assr.state_count());
    for (std::size_t pos = 0; pos < p.graph.size(); ++pos) {
      const std::size_t i = p.graph.state(pos);
      EXPECT_EQ(k.apply(CanonicalVector(p.assr.state_count(), i)), CanonicalVector(p.assr.input_count(), pi[pos]));
    }
  }
}

TEST(Rollout, SelfLoopTailBound) {
  const auto p = ts::self_loop(2.0);
  const auto k = feedback_matrix(p.graph, Policy{1});
  const auto r = rollout(p.assr, p.cost, p.region, k, 1, 0.5, TailBound{1e-6});
  EXPECT_NEAR(r.discounted_cost, 4.0, 1e-6);
  EXPECT_EQ(r.horizon, horizon_for_tail(0.5, stage_cost_bound(p.cost), 1e-6));
  EXPECT_EQ(r.states.size(), r.horizon + 1);
}

TEST(Rollout, ZeroHorizon) {
  const auto p = ts::self_loop(2.0);
  const auto k = feedback_matrix(p.graph, Policy{1});
  const auto r = rollout(p.assr, p.cost, p.region, k, 1, 0.5, FixedHorizon{0});
  EXPECT_TRUE(r.inputs.empty());
  EXPECT_EQ(r.discounted_cost, 0.0);
  EXPECT_EQ(r.states, (std::vector<std::size_t>{1}));
}

TEST(Rollout, RejectsOutsideStart) {
  const auto p = ts::self_loop(2.0);
  const auto k = feedback_matrix(p.graph, Policy{1});
  EXPECT_THROW(rollout(p.assr, p.cost, p.region, k, 2, 0.5, FixedHorizon{3}), InvalidArgument);
}

TEST(Rollout, DetectsBrokenFeedback) {
  // Only input 1 keeps state 2 in the region; the matrix applies input 2.
  ConstraintSpec c;
  c.allowed_states = std::vector<std::size_t>{2};
  const auto p = ts::make_problem(1, 1, {1, 2, 1, 1}, {0, 0, 0, 0}, c);
  const LogicalMatrix bad(2, {1, 2});
  EXPECT_THROW(rollout(p.assr, p.cost, p.region, bad, 2, 0.5, FixedHorizon{3}), InternalError);
}

TEST(Rollout, TailHorizon) {
  EXPECT_EQ(horizon_for_tail(0.5, 0.0, 1e-6), 0u);
  const std::size_t t = horizon_for_tail(0.5, 10.0, 1e-3);
  EXPECT_LT(std::pow(0.5, t) * 10.0 / 0.5, 1e-3);
  EXPECT_GE(std::pow(0.5, t - 1) * 10.0 / 0.5, 1e-3);
}

TEST(Properties, BellmanResidual) {
  for (const auto& p : random_problems(30)) {
    for (double lambda : {0.3, 0.5, 0.9}) {
      const auto v = madani(p.graph, lambda).values;
      EXPECT_LE(bellman_residual(p.graph, v, lambda), 1e-9 * (1 + ts::max_abs(v)));
    }
  }
}

TEST(Properties, ValueIterationAgreesWithMadani) {
  for (const auto& p : random_problems(30)) {
    const auto v = madani(p.graph, 0.5).values;
    for (auto order : {SweepOrder::GaussSeidel, SweepOrder::Jacobi}) {
      const auto r = value_iteration(p.graph, config(1e-12, order));
      EXPECT_LE(ts::max_abs_diff(r.values, v), 1e-12 * 0.5 / (1 - 0.5) + 1e-9);
    }
  }
}

TEST(Properties, PolicyIsOptimal) {
  for (const auto& p : random_problems(30)) {
    const auto v = madani(p.graph, 0.5).values;
    const auto vp = evaluate_policy_exact(p.graph, extract_policy(p.graph, v, 0.5), 0.5);
    EXPECT_LE(ts::max_abs_diff(vp, v), 1e-9);
  }
}

TEST(Properties, JacobiContraction) {
  for (const auto& p : random_problems(20)) {
    const auto r = value_iteration(p.graph, config(1e-10, SweepOrder::Jacobi));
    for (std::size_t k = 1; k < r.residuals.size(); ++k) EXPECT_LE(r.residuals[k], 0.5 * r.residuals[k - 1] + 1e-12);
  }
}

TEST(Properties, ScaleCovariance) {
  for (const auto& p : random_problems(15)) {
    const auto v = madani(p.graph, 0.5).values;
    std::vector<double> scaled = cost_table(p.cost, p.assr.num_state_vars(), p.assr.num_input_vars());
    for (double& g : scaled) g *= 3.0;
    const TableCost cost3{scaled};
    const TransitionGraph g3 = build_stg(p.assr, cost3, p.region);
    const auto v3 = madani(g3, 0.5).values;
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v3[i], 3.0 * v[i], 1e-9 * (1 + std::abs(v3[i])));
    const auto vp = evaluate_policy_exact(g3, extract_policy(g3, v3, 0.5), 0.5);
    EXPECT_LE(ts::max_abs_diff(vp, v3), 1e-9 * (1 + ts::max_abs(v3)));
  }
}

TEST(Properties, RolloutStaysInRegion) {
  for (const auto& p : random_problems(20)) {
    const auto v = madani(p.graph, 0.5).values;
    const auto k = feedback_matrix(p.graph, extract_policy(p.graph, v, 0.5));
    for (std::size_t pos = 0; pos < p.graph.size(); ++pos) {
      const auto r = rollout(p.assr, p.cost, p.region, k, p.graph.state(pos), 0.5, TailBound{1e-9});
      EXPECT_NEAR(r.discounted_cost, v[pos], 1e-9);
      for (std::size_t t = 0; t < r.inputs.size(); ++t) {
        ASSERT_TRUE(p.region.contains(r.states[t]));
        const auto& allowed = p.region.inputs(r.states[t]);
        EXPECT_NE(std::find(allowed.begin(), allowed.end(), r.inputs[t]), allowed.end());
      }
    }
  }
}
