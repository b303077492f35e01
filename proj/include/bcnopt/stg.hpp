#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "bcnopt/network.hpp"

namespace bcnopt {

// One admissible (x, u) pair of a vertex.
struct Action {
  std::size_t input;          // u, 1-based
  std::size_t successor_pos;  // position of Lux in TransitionGraph::vertices()
  double cost;                // g(x, u)
};

// Transition x -> x' carrying w(x, x') = min g(x, u) over U_{xx'} and the
// smallest input attaining it.
struct Edge {
  std::size_t successor_pos;
  double weight;
  std::size_t best_input;
};

// State transition graph G = (V, E) of a constrained network. Vertices are the
// region states in ascending order; all per-vertex data is indexed by vertex
// position, not by state index.
class TransitionGraph {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  TransitionGraph(std::size_t state_count, std::size_t input_count, std::vector<std::size_t> vertices,
                  std::vector<std::vector<Edge>> edges, std::vector<std::vector<Action>> actions);

  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t input_count() const noexcept { return input_count_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept;

  const std::vector<std::size_t>& vertices() const noexcept { return vertices_; }
  std::size_t state(std::size_t pos) const { return vertices_.at(pos); }
  // Position of a state, or npos when the state is not a vertex.
  std::size_t position(std::size_t state) const noexcept {
    return state >= 1 && state <= state_count_ ? vertex_pos_[state - 1] : npos;
  }

  // Out-edges ordered by ascending successor state.
  const std::vector<Edge>& edges(std::size_t pos) const { return edges_.at(pos); }
  // Admissible actions ordered by ascending input.
  const std::vector<Action>& actions(std::size_t pos) const { return actions_.at(pos); }
  // Action for input u at a vertex, or nullptr if u is not admissible there.
  const Action* find_action(std::size_t pos, std::size_t input) const;

  // U_{xx'} for vertex positions; empty when (x, x') is not an edge.
  std::vector<std::size_t> admissible_inputs(std::size_t from_pos, std::size_t to_pos) const;

 private:
  std::size_t state_count_;
  std::size_t input_count_;
  std::vector<std::size_t> vertices_;
  std::vector<std::size_t> vertex_pos_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<Action>> actions_;
};

struct StgBuildStats {
  std::size_t pairs_visited = 0;  // (x, u) pairs examined
};

// Breadth-first construction over the region. Throws InfeasibleProblem when
// the region is empty.
TransitionGraph build_stg(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                          StgBuildStats* stats = nullptr);

// U_{xx'} = {u in C_u(x) | Lux = x'} with 1-based state indices. x must be a
// region state.
std::vector<std::size_t> admissible_inputs(const Assr& assr, const FeasibleRegion& region, std::size_t x,
                                           std::size_t x_next);

// Graphviz rendering; vertices are labelled by state index, edges "w/u*".
void write_dot(std::ostream& out, const TransitionGraph& graph);

}  // namespace bcnopt
