#include "bcnopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "bcnopt/errors.hpp"

namespace bcnopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(begin, end) over [0, count) split into contiguous chunks. Each
// index is written by exactly one worker, so the output does not depend on
// the thread count.
template <class Body>
void for_each_chunk(std::size_t count, std::size_t threads, Body&& body) {
  constexpr std::size_t kMinChunk = 256;
  const std::size_t workers = std::min(threads, count / kMinChunk);
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, chunk));
}

// min over edges of w + lambda * prev[x'] for vertices [begin, end).
void bellman_rows(const TransitionGraph& graph, double lambda, const std::vector<double>& prev,
                  std::vector<double>& next, std::size_t begin, std::size_t end) {
  for (std::size_t p = begin; p < end; ++p) {
    double best = kInf;
    for (const auto& e : graph.edges(p)) best = std::min(best, e.weight + lambda * prev[e.successor_pos]);
    next[p] = best;
  }
}

template <class Update>
ValueIterationResult run_value_iteration(std::size_t size, const SolverConfig& cfg, const ValueTable* initial,
                                         Update&& update) {
  cfg.validate();
  ValueIterationResult result;
  if (initial) {
    if (initial->size() != size) throw InvalidArgument("initial value table has the wrong size");
    result.values = *initial;
  } else {
    result.values.assign(size, 0.0);
  }
  ValueTable previous;
  while (result.iterations < cfg.max_iterations) {
    double psi = 0.0;
    if (cfg.order == SweepOrder::GaussSeidel) {
      for (std::size_t p = 0; p < size; ++p) {
        const double v = result.values[p];
        result.values[p] = update(p, result.values);
        psi = std::max(psi, std::abs(v - result.values[p]));
      }
    } else {
      previous = result.values;
      for (std::size_t p = 0; p < size; ++p) {
        result.values[p] = update(p, previous);
        psi = std::max(psi, std::abs(previous[p] - result.values[p]));
      }
    }
    ++result.iterations;
    result.residuals.push_back(psi);
    if (psi < cfg.theta) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument("discount factor must lie in (0, 1), got " + std::to_string(lambda));
  }
  if (!(theta >= 0.0)) throw InvalidArgument("threshold theta must be nonnegative");
  if (max_iterations == 0) throw InvalidArgument("max_iterations must be positive");
}

ValueIterationResult value_iteration(const TransitionGraph& graph, const SolverConfig& cfg,
                                     const ValueTable* initial) {
  const double lambda = cfg.lambda;
  return run_value_iteration(graph.size(), cfg, initial, [&](std::size_t p, const ValueTable& v) {
    double best = kInf;
    for (const auto& e : graph.edges(p)) best = std::min(best, e.weight + lambda * v[e.successor_pos]);
    return best;
  });
}

ValueIterationResult value_iteration(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                                     const SolverConfig& cfg, const ValueTable* initial) {
  if (region.empty()) throw InfeasibleProblem("infeasible: the constrained region is empty");
  const auto& states = region.states();
  std::vector<std::size_t> pos(assr.state_count(), TransitionGraph::npos);
  for (std::size_t p = 0; p < states.size(); ++p) pos[states[p] - 1] = p;
  const auto g = cost_table(cost, assr.num_state_vars(), assr.num_input_vars());
  const std::size_t big_n = assr.state_count();
  const double lambda = cfg.lambda;
  return run_value_iteration(states.size(), cfg, initial, [&](std::size_t p, const ValueTable& v) {
    const std::size_t x = states[p];
    double best = kInf;
    for (auto u : region.inputs(x)) {
      const double q = g[(u - 1) * big_n + (x - 1)] + lambda * v[pos[assr.next(x, u) - 1]];
      best = std::min(best, q);
    }
    return best;
  });
}

MadaniResult madani(const TransitionGraph& graph, double lambda, bool keep_workspace, std::size_t threads) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("discount factor must lie in (0, 1)");
  const std::size_t size = graph.size();
  if (size == 0) throw InfeasibleProblem("infeasible: the transition graph is empty");
  threads = std::max<std::size_t>(threads, 1);

  // powers[j] = lambda^j
  std::vector<double> powers(size + 1, 1.0);
  for (std::size_t j = 1; j <= size; ++j) powers[j] = powers[j - 1] * lambda;

  // Stage 1: d_0 .. d_|V|. The whole table is needed by stage 2.
  std::vector<std::vector<double>> d(size + 1);
  d[0].assign(size, 0.0);
  for (std::size_t k = 1; k <= size; ++k) {
    d[k].resize(size);
    for_each_chunk(size, threads, [&](std::size_t b, std::size_t e) { bellman_rows(graph, lambda, d[k - 1], d[k], b, e); });
  }

  // Stage 2.
  std::vector<double> y0(size);
  for_each_chunk(size, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      double best = -kInf;
      for (std::size_t k = 0; k < size; ++k) {
        const double pw = powers[size - k];
        best = std::max(best, (d[size][p] - pw * d[k][p]) / (1.0 - pw));
      }
      y0[p] = best;
    }
  });

  // Stages 3 and 4 interleaved: v* is the running minimum over y_0 .. y_{|V|-1}.
  MadaniResult result;
  result.values = y0;
  std::vector<std::vector<double>> y;
  std::vector<double> prev = y0;
  std::vector<double> cur(size);
  if (keep_workspace) {
    y.reserve(size);
    y.push_back(y0);
  }
  for (std::size_t k = 1; k < size; ++k) {
    for_each_chunk(size, threads, [&](std::size_t b, std::size_t e) { bellman_rows(graph, lambda, prev, cur, b, e); });
    for (std::size_t p = 0; p < size; ++p) result.values[p] = std::min(result.values[p], cur[p]);
    if (keep_workspace) y.push_back(cur);
    std::swap(prev, cur);
  }
  if (keep_workspace) result.workspace = MadaniWorkspace{std::move(d), std::move(y)};
  return result;
}

Policy extract_policy(const TransitionGraph& graph, const ValueTable& values, double lambda) {
  if (values.size() != graph.size()) throw InvalidArgument("value table does not match the graph");
  Policy policy(graph.size());
  for (std::size_t p = 0; p < graph.size(); ++p) {
    double best = kInf;
    std::size_t best_input = 0;
    for (const auto& e : graph.edges(p)) {
      const double q = e.weight + lambda * values[e.successor_pos];
      if (q < best || (q == best && e.best_input < best_input)) {
        best = q;
        best_input = e.best_input;
      }
    }
    if (best_input == 0) throw InternalError("vertex without outgoing edges");
    policy[p] = best_input;
  }
  return policy;
}

LogicalMatrix feedback_matrix(const TransitionGraph& graph, const Policy& policy) {
  if (policy.size() != graph.size()) throw InvalidArgument("policy does not match the graph");
  std::vector<std::size_t> cols(graph.state_count(), 1);
  for (std::size_t p = 0; p < graph.size(); ++p) {
    if (!graph.find_action(p, policy[p])) {
      throw InvalidArgument("input " + std::to_string(policy[p]) + " is not admissible at state " +
                            std::to_string(graph.state(p)));
    }
    cols[graph.state(p) - 1] = policy[p];
  }
  return LogicalMatrix(graph.input_count(), std::move(cols));
}

ValueTable evaluate_policy_exact(const TransitionGraph& graph, const Policy& policy, double lambda) {
  const std::size_t size = graph.size();
  if (policy.size() != size) throw InvalidArgument("policy does not match the graph");
  std::vector<std::size_t> succ(size);
  std::vector<double> cost(size);
  for (std::size_t p = 0; p < size; ++p) {
    const Action* a = graph.find_action(p, policy[p]);
    if (!a) {
      throw InvalidArgument("input " + std::to_string(policy[p]) + " is not admissible at state " +
                            std::to_string(graph.state(p)));
    }
    succ[p] = a->successor_pos;
    cost[p] = a->cost;
  }

  enum : std::uint8_t { kNew, kOnPath, kDone };
  std::vector<std::uint8_t> mark(size, kNew);
  std::vector<std::size_t> path_index(size, 0);
  ValueTable v(size, 0.0);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < size; ++start) {
    if (mark[start] != kNew) continue;
    path.clear();
    std::size_t p = start;
    while (mark[p] == kNew) {
      mark[p] = kOnPath;
      path_index[p] = path.size();
      path.push_back(p);
      p = succ[p];
    }
    std::size_t tail_end = path.size();  // path[0, tail_end) is resolved by back-substitution
    if (mark[p] == kOnPath) {
      const std::size_t entry = path_index[p];
      const std::size_t len = path.size() - entry;
      double cycle_cost = 0.0;
      double discount = 1.0;
      for (std::size_t t = 0; t < len; ++t) {
        cycle_cost += discount * cost[path[entry + t]];
        discount *= lambda;
      }
      v[path[entry]] = cycle_cost / (1.0 - discount);
      mark[path[entry]] = kDone;
      for (std::size_t t = len; t-- > 1;) {
        const std::size_t q = path[entry + t];
        v[q] = cost[q] + lambda * v[succ[q]];
        mark[q] = kDone;
      }
      tail_end = entry;
    }
    for (std::size_t t = tail_end; t-- > 0;) {
      const std::size_t q = path[t];
      v[q] = cost[q] + lambda * v[succ[q]];
      mark[q] = kDone;
    }
  }
  return v;
}

double bellman_residual(const TransitionGraph& graph, const ValueTable& values, double lambda) {
  if (values.size() != graph.size()) throw InvalidArgument("value table does not match the graph");
  double worst = 0.0;
  for (std::size_t p = 0; p < graph.size(); ++p) {
    double best = kInf;
    for (const auto& e : graph.edges(p)) best = std::min(best, e.weight + lambda * values[e.successor_pos]);
    worst = std::max(worst, std::abs(values[p] - best));
  }
  return worst;
}

std::size_t horizon_for_tail(double lambda, double cost_bound, double epsilon) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("discount factor must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw InvalidArgument("tail bound epsilon must be positive");
  std::size_t steps = 0;
  double tail = cost_bound / (1.0 - lambda);
  while (!(tail < epsilon)) {
    tail *= lambda;
    ++steps;
  }
  return steps;
}

RolloutResult rollout(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                      const LogicalMatrix& feedback, std::size_t x0, double lambda, const Horizon& horizon) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("discount factor must lie in (0, 1)");
  if (feedback.rows() != assr.input_count() || feedback.cols() != assr.state_count()) {
    throw DimensionError("feedback matrix must be M x N");
  }
  if (!region.contains(x0)) {
    throw InvalidArgument("initial state " + std::to_string(x0) + " is outside the admissible region");
  }
  RolloutResult r;
  if (const auto* fixed = std::get_if<FixedHorizon>(&horizon)) {
    r.horizon = fixed->steps;
  } else {
    r.horizon = horizon_for_tail(lambda, stage_cost_bound(cost), std::get<TailBound>(horizon).epsilon);
  }
  const std::size_t n = assr.num_state_vars();
  const std::size_t m = assr.num_input_vars();
  r.states.reserve(r.horizon + 1);
  r.states.push_back(x0);
  double discount = 1.0;
  std::size_t x = x0;
  for (std::size_t t = 0; t < r.horizon; ++t) {
    const std::size_t u = feedback.column(x);
    const auto& allowed = region.inputs(x);
    if (!std::binary_search(allowed.begin(), allowed.end(), u)) {
      throw InternalError("feedback applies inadmissible input " + std::to_string(u) + " at state " +
                          std::to_string(x));
    }
    const double g = stage_cost(cost, x, u, n, m);
    r.inputs.push_back(u);
    r.costs.push_back(g);
    r.discounted_cost += discount * g;
    discount *= lambda;
    x = assr.next(x, u);
    if (!region.contains(x)) throw InternalError("trajectory left the admissible region");
    r.states.push_back(x);
  }
  return r;
}

}  // namespace bcnopt
