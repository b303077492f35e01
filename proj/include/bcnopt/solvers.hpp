#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "bcnopt/logic.hpp"
#include "bcnopt/network.hpp"
#include "bcnopt/stg.hpp"

namespace bcnopt {

// Values indexed by vertex position of a TransitionGraph.
using ValueTable = std::vector<double>;

// Input index (1-based) per vertex position.
using Policy = std::vector<std::size_t>;

enum class SweepOrder {
  GaussSeidel,  // in-place updates in ascending vertex order
  Jacobi,       // every update of a sweep reads the previous sweep
};

struct SolverConfig {
  double lambda = 0.5;
  double theta = 1e-3;
  std::size_t max_iterations = 1'000'000;
  SweepOrder order = SweepOrder::GaussSeidel;
  // Worker threads for per-vertex stages; results do not depend on it.
  std::size_t threads = 1;

  // Throws InvalidArgument unless 0 < lambda < 1, theta >= 0 and
  // max_iterations > 0.
  void validate() const;
};

struct ValueIterationResult {
  ValueTable values;
  std::size_t iterations = 0;     // sweeps performed, including the final one
  bool converged = false;         // psi < theta was reached
  std::vector<double> residuals;  // psi of every sweep
};

// Repeats V(x) <- min_u g(x, u) + lambda V(Lux) over all vertices until the
// largest change of a sweep drops below theta. `initial` defaults to zeros.
ValueIterationResult value_iteration(const TransitionGraph& graph, const SolverConfig& cfg,
                                     const ValueTable* initial = nullptr);

// Same iteration driven directly by the transition table, one candidate per
// admissible input instead of per edge.
ValueIterationResult value_iteration(const Assr& assr, const StageCostSpec& cost,
                                     const FeasibleRegion& region, const SolverConfig& cfg,
                                     const ValueTable* initial = nullptr);

// d_k and y_k tables, row k holding the values of every vertex.
struct MadaniWorkspace {
  std::vector<std::vector<double>> d;  // k = 0 .. |V|
  std::vector<std::vector<double>> y;  // k = 0 .. |V| - 1
};

struct MadaniResult {
  ValueTable values;
  std::optional<MadaniWorkspace> workspace;
};

// Exact optimal values of the discounted deterministic MDP on the graph:
//   1. d_k(x) = min_{(x,x')} w(x,x') + lambda d_{k-1}(x'), d_0 = 0, k <= |V|
//   2. y_0(x) = max_{k<|V|} (d_|V|(x) - lambda^{|V|-k} d_k(x)) / (1 - lambda^{|V|-k})
//   3. y_k by the recursion of step 1 seeded with y_0, k < |V|
//   4. v*(x) = min_k y_k(x)
// O(|V| |E|) time. With keep_workspace the full d and y tables are returned;
// otherwise y is computed with two rolling rows.
MadaniResult madani(const TransitionGraph& graph, double lambda, bool keep_workspace = false,
                    std::size_t threads = 1);

// Greedy policy argmin_u g(x, u) + lambda V(Lux), evaluated over edges;
// ties go to the smallest input.
Policy extract_policy(const TransitionGraph& graph, const ValueTable& values, double lambda);

// K in L_{M x N}: Col_i(K) = delta_M^{pi(i)} for region states, delta_M^1 elsewhere.
LogicalMatrix feedback_matrix(const TransitionGraph& graph, const Policy& policy);

// Exact v_pi: each closed-loop trajectory ends in a cycle of length l with
// discounted cycle cost C, whose entry has value C / (1 - lambda^l); the
// remaining values follow by back-substitution. O(|V|).
ValueTable evaluate_policy_exact(const TransitionGraph& graph, const Policy& policy, double lambda);

// max_x |v(x) - min_edges (w + lambda v(x'))|.
double bellman_residual(const TransitionGraph& graph, const ValueTable& values, double lambda);

struct FixedHorizon {
  std::size_t steps;
};
// Horizon T chosen so the neglected tail lambda^T g_max / (1 - lambda) < epsilon.
struct TailBound {
  double epsilon;
};
using Horizon = std::variant<FixedHorizon, TailBound>;

std::size_t horizon_for_tail(double lambda, double cost_bound, double epsilon);

struct RolloutResult {
  std::vector<std::size_t> states;  // T + 1 entries, states[0] = x0
  std::vector<std::size_t> inputs;  // T entries
  std::vector<double> costs;        // g(states[t], inputs[t])
  double discounted_cost = 0.0;
  std::size_t horizon = 0;
};

// Closed-loop simulation of u(t) = K x(t) from x0. Throws InvalidArgument if
// x0 is outside the region and InternalError if the trajectory leaves it or
// applies an inadmissible input.
RolloutResult rollout(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                      const LogicalMatrix& feedback, std::size_t x0, double lambda, const Horizon& horizon);

}  // namespace bcnopt
