#pragma once

// Slow, independent ground truth for the solvers. Test use only.

#include <cstddef>
#include <cstdint>
#include <utility>

#include "bcnopt/network.hpp"
#include "bcnopt/solvers.hpp"
#include "bcnopt/stg.hpp"

namespace bcnopt::oracle {

struct OracleBudget {
  std::size_t max_policies = 1'000'000;
  std::size_t max_horizon = 10'000;
};

// Number of stationary feasible policies, saturating at SIZE_MAX.
std::size_t policy_count(const TransitionGraph& graph);

// Evaluates every stationary feasible policy exactly and returns the
// elementwise minimum together with one policy attaining it everywhere.
// Throws OracleRefused if the policy count exceeds the budget.
std::pair<ValueTable, Policy> enumerate_optimal(const TransitionGraph& graph, double lambda,
                                                const OracleBudget& budget = {});

// Optimal T-step discounted cost with zero terminal value, by backward
// induction over the raw transition table. Aligned with region.states().
ValueTable truncated_dp(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                        double lambda, std::size_t horizon, const OracleBudget& budget = {});

struct RandomNetworkOptions {
  std::size_t max_state_vars = 3;
  std::size_t max_input_vars = 2;
  int min_cost = -5;
  int max_cost = 5;
  bool constrained = false;
};

// Network with uniformly random truth tables (written as DNF expressions over
// the variables), integer table costs drawn uniformly from [min_cost,
// max_cost] and, when requested, random constraints whose pruned region is
// non-empty. The same seed always gives the same network.
BooleanNetwork random_network(std::uint64_t seed, const RandomNetworkOptions& options = {});

}  // namespace bcnopt::oracle
