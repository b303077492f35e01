#include "bcnopt/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "bcnopt/errors.hpp"

namespace bcnopt {

namespace {

constexpr std::size_t kMaxStateVars = 24;
constexpr std::size_t kMaxInputVars = 16;

void check_subset(const std::vector<std::size_t>& values, std::size_t limit, const std::string& what) {
  if (values.empty()) throw ValidationError(what + " must not be empty");
  std::set<std::size_t> seen;
  for (auto v : values) {
    if (v < 1 || v > limit) {
      throw ValidationError(what + " contains " + std::to_string(v) + ", outside [1, " +
                            std::to_string(limit) + "]");
    }
    if (!seen.insert(v).second) throw ValidationError(what + " repeats " + std::to_string(v));
  }
}

}  // namespace

void validate(const BooleanNetwork& net) {
  const std::size_t n = net.num_states();
  const std::size_t m = net.num_inputs();
  if (n == 0) throw ValidationError("a network needs at least one state variable");
  if (n > kMaxStateVars) throw ValidationError("too many state variables (limit 24)");
  if (m > kMaxInputVars) throw ValidationError("too many input variables (limit 16)");
  if (net.functions.size() != n) {
    throw ValidationError("expected " + std::to_string(n) + " update functions, got " +
                          std::to_string(net.functions.size()));
  }

  std::set<std::string> names;
  for (const auto& list : {net.state_names, net.input_names}) {
    for (const auto& name : list) {
      if (name.empty()) throw ValidationError("variable names must not be empty");
      if (!names.insert(name).second) throw ValidationError("duplicate variable name '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : net.functions[i].variables()) {
      if (!names.count(v)) {
        throw ValidationError("function of '" + net.state_names[i] + "' references unknown variable '" +
                              v + "'");
      }
    }
  }

  const std::size_t big_n = net.state_count();
  const std::size_t big_m = net.input_count();
  if (const auto* lin = std::get_if<LinearCost>(&net.cost)) {
    if (lin->state_weights.size() != n || lin->input_weights.size() != m) {
      throw ValidationError("linear cost needs " + std::to_string(n) + " state weights and " +
                            std::to_string(m) + " input weights");
    }
    for (double w : lin->state_weights)
      if (!std::isfinite(w)) throw ValidationError("cost weights must be finite");
    for (double w : lin->input_weights)
      if (!std::isfinite(w)) throw ValidationError("cost weights must be finite");
  } else {
    const auto& table = std::get<TableCost>(net.cost);
    if (table.values.size() != big_m * big_n) {
      throw ValidationError("cost table needs " + std::to_string(big_m * big_n) + " entries, got " +
                            std::to_string(table.values.size()));
    }
    for (double v : table.values)
      if (!std::isfinite(v)) throw ValidationError("cost table entries must be finite");
  }

  const auto& cons = net.constraints;
  if (cons.allowed_states) check_subset(*cons.allowed_states, big_n, "allowed_states");
  for (const auto& [state, inputs] : cons.allowed_inputs) {
    if (state < 1 || state > big_n) {
      throw ValidationError("allowed_inputs key " + std::to_string(state) + " is not a state index");
    }
    if (cons.allowed_states &&
        std::find(cons.allowed_states->begin(), cons.allowed_states->end(), state) ==
            cons.allowed_states->end()) {
      throw ValidationError("allowed_inputs key " + std::to_string(state) + " is not an allowed state");
    }
    check_subset(inputs, big_m, "allowed_inputs of state " + std::to_string(state));
  }
}

Assr::Assr(std::size_t num_states, std::size_t num_inputs, std::vector<std::uint32_t> next)
    : n_(num_states),
      m_(num_inputs),
      state_count_(std::size_t{1} << num_states),
      input_count_(std::size_t{1} << num_inputs),
      table_(std::move(next)) {
  if (n_ == 0) throw InvalidArgument("an ASSR needs at least one state variable");
  if (table_.size() != state_count_ * input_count_) {
    throw InvalidArgument("transition table must have M*N = " +
                          std::to_string(state_count_ * input_count_) + " entries");
  }
  for (auto s : table_) {
    if (s < 1 || s > state_count_) throw InvalidArgument("transition table entry out of range");
  }
}

LogicalMatrix Assr::matrix() const {
  return LogicalMatrix(state_count_, std::vector<std::size_t>(table_.begin(), table_.end()));
}

Assr build_assr(const BooleanNetwork& net) {
  validate(net);
  const std::size_t n = net.num_states();
  const std::size_t m = net.num_inputs();
  const std::size_t big_n = net.state_count();
  const std::size_t big_m = net.input_count();

  // Slot layout: states first, then inputs.
  std::vector<std::string> slots = net.state_names;
  slots.insert(slots.end(), net.input_names.begin(), net.input_names.end());
  std::vector<CompiledExpr> fs;
  fs.reserve(n);
  for (const auto& f : net.functions) fs.emplace_back(f, slots);

  std::vector<std::uint8_t> values(n + m);
  std::vector<std::uint8_t> out(n);
  const std::span<std::uint8_t> state_bits(values.data(), n);
  const std::span<std::uint8_t> input_bits(values.data() + n, m);
  std::vector<std::uint32_t> table(big_m * big_n);
  for (std::size_t j = 1; j <= big_m; ++j) {
    decode_bits(j, input_bits);
    for (std::size_t i = 1; i <= big_n; ++i) {
      decode_bits(i, state_bits);
      for (std::size_t k = 0; k < n; ++k) out[k] = fs[k](values) ? 1 : 0;
      table[(j - 1) * big_n + (i - 1)] = static_cast<std::uint32_t>(encode_bits(out));
    }
  }
  return Assr(n, m, std::move(table));
}

double stage_cost(const StageCostSpec& spec, std::size_t x, std::size_t u, std::size_t n,
                  std::size_t m) {
  const std::size_t big_n = std::size_t{1} << n;
  const std::size_t big_m = std::size_t{1} << m;
  if (x < 1 || x > big_n) throw InvalidArgument("state index " + std::to_string(x) + " out of range");
  if (u < 1 || u > big_m) throw InvalidArgument("input index " + std::to_string(u) + " out of range");
  if (const auto* table = std::get_if<TableCost>(&spec)) {
    return table->values.at((u - 1) * big_n + (x - 1));
  }
  const auto& lin = std::get<LinearCost>(spec);
  if (lin.state_weights.size() != n || lin.input_weights.size() != m) {
    throw InvalidArgument("linear cost weights do not match the network dimensions");
  }
  double g = 0.0;
  std::size_t xs = x - 1;
  for (std::size_t k = n; k-- > 0; xs >>= 1)
    if (xs & 1u) g += lin.state_weights[k];
  std::size_t us = u - 1;
  for (std::size_t k = m; k-- > 0; us >>= 1)
    if (us & 1u) g += lin.input_weights[k];
  return g;
}

std::vector<double> cost_table(const StageCostSpec& spec, std::size_t n, std::size_t m) {
  const std::size_t big_n = std::size_t{1} << n;
  const std::size_t big_m = std::size_t{1} << m;
  std::vector<double> table(big_n * big_m);
  for (std::size_t j = 1; j <= big_m; ++j)
    for (std::size_t i = 1; i <= big_n; ++i) table[(j - 1) * big_n + (i - 1)] = stage_cost(spec, i, j, n, m);
  return table;
}

double stage_cost_bound(const StageCostSpec& spec) {
  double bound = 0.0;
  if (const auto* lin = std::get_if<LinearCost>(&spec)) {
    for (double w : lin->state_weights) bound += std::abs(w);
    for (double w : lin->input_weights) bound += std::abs(w);
  } else {
    for (double v : std::get<TableCost>(spec).values) bound = std::max(bound, std::abs(v));
  }
  return bound;
}

FeasibleRegion::FeasibleRegion(std::size_t state_count, std::vector<std::size_t> states,
                               std::vector<std::vector<std::size_t>> inputs)
    : state_count_(state_count),
      states_(std::move(states)),
      member_(state_count, false),
      inputs_(std::move(inputs)) {
  if (inputs_.size() != state_count_) throw InvalidArgument("region needs an input list per state");
  std::sort(states_.begin(), states_.end());
  for (auto s : states_) {
    if (s < 1 || s > state_count_) throw InvalidArgument("region state out of range");
    member_[s - 1] = true;
  }
}

ConstraintSpec FeasibleRegion::as_constraints() const {
  ConstraintSpec spec;
  spec.allowed_states = states_;
  for (auto s : states_) spec.allowed_inputs[s] = inputs_[s - 1];
  return spec;
}

FeasibleRegion prune_region(const Assr& assr, const ConstraintSpec& cons) {
  const std::size_t big_n = assr.state_count();
  const std::size_t big_m = assr.input_count();

  std::vector<bool> alive(big_n, !cons.allowed_states.has_value());
  if (cons.allowed_states) {
    for (auto s : *cons.allowed_states) {
      if (s < 1 || s > big_n) throw InvalidArgument("allowed state " + std::to_string(s) + " out of range");
      alive[s - 1] = true;
    }
  }

  std::vector<std::vector<std::size_t>> candidates(big_n);
  for (std::size_t x = 1; x <= big_n; ++x) {
    if (!alive[x - 1]) continue;
    auto it = cons.allowed_inputs.find(x);
    if (it == cons.allowed_inputs.end()) {
      candidates[x - 1].resize(big_m);
      for (std::size_t u = 1; u <= big_m; ++u) candidates[x - 1][u - 1] = u;
    } else {
      for (auto u : it->second) {
        if (u < 1 || u > big_m) throw InvalidArgument("allowed input " + std::to_string(u) + " out of range");
      }
      candidates[x - 1] = it->second;
      std::sort(candidates[x - 1].begin(), candidates[x - 1].end());
    }
  }

  // support[x] counts candidate inputs of x whose successor is still alive;
  // predecessors[y] lists the states with a candidate input into y.
  std::vector<std::size_t> support(big_n, 0);
  std::vector<std::vector<std::size_t>> predecessors(big_n);
  for (std::size_t x = 1; x <= big_n; ++x) {
    if (!alive[x - 1]) continue;
    for (auto u : candidates[x - 1]) {
      const std::size_t y = assr.next(x, u);
      if (alive[y - 1]) {
        ++support[x - 1];
        predecessors[y - 1].push_back(x);
      }
    }
  }

  std::deque<std::size_t> dead;
  for (std::size_t x = 1; x <= big_n; ++x)
    if (alive[x - 1] && support[x - 1] == 0) dead.push_back(x);
  while (!dead.empty()) {
    const std::size_t y = dead.front();
    dead.pop_front();
    if (!alive[y - 1]) continue;
    alive[y - 1] = false;
    for (auto p : predecessors[y - 1]) {
      if (alive[p - 1] && --support[p - 1] == 0) dead.push_back(p);
    }
  }

  std::vector<std::size_t> states;
  std::vector<std::vector<std::size_t>> inputs(big_n);
  for (std::size_t x = 1; x <= big_n; ++x) {
    if (!alive[x - 1]) continue;
    states.push_back(x);
    for (auto u : candidates[x - 1])
      if (alive[assr.next(x, u) - 1]) inputs[x - 1].push_back(u);
  }
  return FeasibleRegion(big_n, std::move(states), std::move(inputs));
}

FeasibleRegion feasible_region(const Assr& assr, const ConstraintSpec& cons) {
  auto region = prune_region(assr, cons);
  if (region.empty()) {
    throw InfeasibleProblem("infeasible: no admissible state can evolve indefinitely under the constraints");
  }
  return region;
}

}  // namespace bcnopt
