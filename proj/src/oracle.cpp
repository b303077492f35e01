#include "bcnopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bcnopt/errors.hpp"

namespace bcnopt::oracle {

std::size_t policy_count(const TransitionGraph& graph) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t count = 1;
  for (std::size_t p = 0; p < graph.size(); ++p) {
    const std::size_t k = graph.actions(p).size();
    if (k != 0 && count > kMax / k) return kMax;
    count *= k;
  }
  return count;
}

std::pair<ValueTable, Policy> enumerate_optimal(const TransitionGraph& graph, double lambda,
                                                const OracleBudget& budget) {
  const std::size_t count = policy_count(graph);
  if (count > budget.max_policies) {
    throw OracleRefused("policy enumeration needs " + std::to_string(count) + " policies, budget is " +
                        std::to_string(budget.max_policies));
  }
  const std::size_t size = graph.size();

  // Mixed-radix counter over the action lists.
  std::vector<std::size_t> digit(size, 0);
  Policy policy(size);
  auto advance = [&]() {
    for (std::size_t p = 0; p < size; ++p) {
      if (++digit[p] < graph.actions(p).size()) return true;
      digit[p] = 0;
    }
    return false;
  };
  auto current = [&]() {
    for (std::size_t p = 0; p < size; ++p) policy[p] = graph.actions(p)[digit[p]].input;
    return policy;
  };

  ValueTable best(size, std::numeric_limits<double>::infinity());
  do {
    const auto v = evaluate_policy_exact(graph, current(), lambda);
    for (std::size_t p = 0; p < size; ++p) best[p] = std::min(best[p], v[p]);
  } while (advance());

  std::fill(digit.begin(), digit.end(), 0);
  do {
    const auto v = evaluate_policy_exact(graph, current(), lambda);
    bool attains = true;
    for (std::size_t p = 0; p < size && attains; ++p) {
      attains = std::abs(v[p] - best[p]) <= 1e-9 * (1.0 + std::abs(best[p]));
    }
    if (attains) return {best, policy};
  } while (advance());
  throw InternalError("no enumerated policy attains the elementwise minimum");
}

ValueTable truncated_dp(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                        double lambda, std::size_t horizon, const OracleBudget& budget) {
  if (horizon < 1) throw InvalidArgument("truncated horizon must be at least 1");
  if (horizon > budget.max_horizon) throw OracleRefused("horizon exceeds the oracle budget");
  const std::size_t big_n = assr.state_count();
  const std::size_t n = assr.num_state_vars();
  const std::size_t m = assr.num_input_vars();

  // Indexed by state, so this never consults the transition graph.
  std::vector<double> next_value(big_n, 0.0);
  std::vector<double> value(big_n, 0.0);
  for (std::size_t step = 0; step < horizon; ++step) {
    for (auto x : region.states()) {
      double best = std::numeric_limits<double>::infinity();
      for (auto u : region.inputs(x)) {
        best = std::min(best, stage_cost(cost, x, u, n, m) + lambda * next_value[assr.next(x, u) - 1]);
      }
      value[x - 1] = best;
    }
    std::swap(value, next_value);
  }
  ValueTable out;
  out.reserve(region.states().size());
  for (auto x : region.states()) out.push_back(next_value[x - 1]);
  return out;
}

namespace {

std::string minterm(std::size_t assignment, const std::vector<std::string>& vars) {
  std::string term;
  std::vector<std::uint8_t> bits(vars.size());
  decode_bits(assignment, bits);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k) term += " & ";
    if (!bits[k]) term += '!';
    term += vars[k];
  }
  return term;
}

}  // namespace

BooleanNetwork random_network(std::uint64_t seed, const RandomNetworkOptions& options) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto coin = [&rng](double p) { return std::bernoulli_distribution(p)(rng); };

  BooleanNetwork net;
  const std::size_t n = uniform(1, std::max<std::size_t>(1, options.max_state_vars));
  const std::size_t m = uniform(0, options.max_input_vars);
  for (std::size_t i = 0; i < n; ++i) net.state_names.push_back("x" + std::to_string(i + 1));
  for (std::size_t j = 0; j < m; ++j) net.input_names.push_back("u" + std::to_string(j + 1));

  std::vector<std::string> vars = net.input_names;
  vars.insert(vars.end(), net.state_names.begin(), net.state_names.end());
  const std::size_t rows = std::size_t{1} << vars.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string dnf;
    for (std::size_t a = 1; a <= rows; ++a) {
      if (!coin(0.5)) continue;
      if (!dnf.empty()) dnf += " | ";
      dnf += minterm(a, vars);
    }
    net.functions.push_back(parse_expr(dnf.empty() ? "0" : dnf));
  }

  const std::size_t big_n = net.state_count();
  const std::size_t big_m = net.input_count();
  TableCost table;
  std::uniform_int_distribution<int> cost(options.min_cost, options.max_cost);
  for (std::size_t k = 0; k < big_n * big_m; ++k) table.values.push_back(cost(rng));
  net.cost = std::move(table);

  if (options.constrained) {
    const Assr assr = build_assr(net);
    for (;;) {
      ConstraintSpec cons;
      std::vector<std::size_t> states;
      for (std::size_t x = 1; x <= big_n; ++x)
        if (coin(0.75)) states.push_back(x);
      if (states.empty()) states.push_back(uniform(1, big_n));
      for (auto x : states) {
        if (!coin(0.5)) continue;
        std::vector<std::size_t> inputs;
        for (std::size_t u = 1; u <= big_m; ++u)
          if (coin(0.6)) inputs.push_back(u);
        if (inputs.empty()) inputs.push_back(uniform(1, big_m));
        cons.allowed_inputs[x] = std::move(inputs);
      }
      cons.allowed_states = std::move(states);
      if (!prune_region(assr, cons).empty()) {
        net.constraints = std::move(cons);
        break;
      }
    }
  }
  validate(net);
  return net;
}

}  // namespace bcnopt::oracle
