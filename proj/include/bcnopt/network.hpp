#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bcnopt/expr.hpp"

namespace bcnopt {

// g(x, u) = A . X + B . U on the 0/1 bit vectors of state and input.
struct LinearCost {
  std::vector<double> state_weights;  // A, one per state variable
  std::vector<double> input_weights;  // B, one per input variable

  friend bool operator==(const LinearCost&, const LinearCost&) = default;
};

// Explicit g with M * N entries; entry (j - 1) * N + i is g(delta_N^i, delta_M^j).
struct TableCost {
  std::vector<double> values;

  friend bool operator==(const TableCost&, const TableCost&) = default;
};

using StageCostSpec = std::variant<LinearCost, TableCost>;

// C_x and C_u(.) with 1-based state and input indices. A missing
// allowed_states means every state; a state without an allowed_inputs entry
// accepts every input.
struct ConstraintSpec {
  std::optional<std::vector<std::size_t>> allowed_states;
  std::map<std::size_t, std::vector<std::size_t>> allowed_inputs;

  friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
};

struct BooleanNetwork {
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
  std::vector<BoolExpr> functions;  // functions[i] drives state_names[i]
  StageCostSpec cost = LinearCost{};
  ConstraintSpec constraints;

  std::size_t num_states() const noexcept { return state_names.size(); }
  std::size_t num_inputs() const noexcept { return input_names.size(); }
  std::size_t state_count() const noexcept { return std::size_t{1} << num_states(); }
  std::size_t input_count() const noexcept { return std::size_t{1} << num_inputs(); }

  friend bool operator==(const BooleanNetwork&, const BooleanNetwork&) = default;
};

// Throws ValidationError describing the first violated invariant.
void validate(const BooleanNetwork& net);

// Transition table of x(t+1) = L u(t) x(t): the successor of delta_N^i under
// delta_M^j is L's column (j - 1) * N + i.
class Assr {
 public:
  Assr(std::size_t num_states, std::size_t num_inputs, std::vector<std::uint32_t> next);

  std::size_t num_state_vars() const noexcept { return n_; }
  std::size_t num_input_vars() const noexcept { return m_; }
  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t input_count() const noexcept { return input_count_; }

  std::size_t next(std::size_t state, std::size_t input) const noexcept {
    return table_[(input - 1) * state_count_ + (state - 1)];
  }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }

  // L in L_{N x MN}.
  LogicalMatrix matrix() const;

  friend bool operator==(const Assr&, const Assr&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
  std::size_t state_count_;
  std::size_t input_count_;
  std::vector<std::uint32_t> table_;
};

// Exhaustive truth-table evaluation of every (state, input) pair.
Assr build_assr(const BooleanNetwork& net);

// Throws InvalidArgument when x or u is out of range.
double stage_cost(const StageCostSpec& spec, std::size_t x, std::size_t u, std::size_t n,
                  std::size_t m);

// g for every pair, laid out like Assr::table().
std::vector<double> cost_table(const StageCostSpec& spec, std::size_t n, std::size_t m);

// Upper bound on |g|.
double stage_cost_bound(const StageCostSpec& spec);

// Constrained region after pruning states that cannot evolve forever.
class FeasibleRegion {
 public:
  FeasibleRegion(std::size_t state_count, std::vector<std::size_t> states,
                 std::vector<std::vector<std::size_t>> inputs);

  bool empty() const noexcept { return states_.empty(); }
  std::size_t state_count() const noexcept { return state_count_; }

  // Ascending 1-based state indices.
  const std::vector<std::size_t>& states() const noexcept { return states_; }
  bool contains(std::size_t state) const noexcept {
    return state >= 1 && state <= state_count_ && member_[state - 1];
  }
  // Ascending admissible inputs of a region state; empty outside the region.
  const std::vector<std::size_t>& inputs(std::size_t state) const { return inputs_.at(state - 1); }

  // Same region expressed as a set of constraints.
  ConstraintSpec as_constraints() const;

  friend bool operator==(const FeasibleRegion&, const FeasibleRegion&) = default;

 private:
  std::size_t state_count_;
  std::vector<std::size_t> states_;
  std::vector<bool> member_;
  std::vector<std::vector<std::size_t>> inputs_;
};

// Largest S within C_x such that every state of S has an input in C_u(x)
// leading back into S; inputs leaving S are dropped. May be empty.
FeasibleRegion prune_region(const Assr& assr, const ConstraintSpec& cons);

// prune_region that throws InfeasibleProblem on an empty result.
FeasibleRegion feasible_region(const Assr& assr, const ConstraintSpec& cons);

}  // namespace bcnopt
