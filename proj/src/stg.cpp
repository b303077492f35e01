#include "bcnopt/stg.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>

#include "bcnopt/errors.hpp"

namespace bcnopt {

TransitionGraph::TransitionGraph(std::size_t state_count, std::size_t input_count,
                                 std::vector<std::size_t> vertices, std::vector<std::vector<Edge>> edges,
                                 std::vector<std::vector<Action>> actions)
    : state_count_(state_count),
      input_count_(input_count),
      vertices_(std::move(vertices)),
      vertex_pos_(state_count, npos),
      edges_(std::move(edges)),
      actions_(std::move(actions)) {
  if (edges_.size() != vertices_.size() || actions_.size() != vertices_.size()) {
    throw InvalidArgument("transition graph needs edge and action lists for every vertex");
  }
  for (std::size_t p = 0; p < vertices_.size(); ++p) {
    const std::size_t s = vertices_[p];
    if (s < 1 || s > state_count_) throw InvalidArgument("vertex state out of range");
    if (p > 0 && vertices_[p - 1] >= s) throw InvalidArgument("vertices must be strictly ascending");
    vertex_pos_[s - 1] = p;
  }
}

std::size_t TransitionGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& e : edges_) total += e.size();
  return total;
}

const Action* TransitionGraph::find_action(std::size_t pos, std::size_t input) const {
  const auto& list = actions_.at(pos);
  auto it = std::lower_bound(list.begin(), list.end(), input,
                             [](const Action& a, std::size_t u) { return a.input < u; });
  return it != list.end() && it->input == input ? &*it : nullptr;
}

std::vector<std::size_t> TransitionGraph::admissible_inputs(std::size_t from_pos, std::size_t to_pos) const {
  std::vector<std::size_t> out;
  for (const auto& a : actions_.at(from_pos))
    if (a.successor_pos == to_pos) out.push_back(a.input);
  return out;
}

TransitionGraph build_stg(const Assr& assr, const StageCostSpec& cost, const FeasibleRegion& region,
                          StgBuildStats* stats) {
  if (region.empty()) throw InfeasibleProblem("infeasible: the constrained region is empty");
  if (region.state_count() != assr.state_count()) {
    throw InvalidArgument("region and transition table disagree on the number of states");
  }
  const std::size_t n = assr.num_state_vars();
  const std::size_t m = assr.num_input_vars();
  const auto& vertices = region.states();
  const std::size_t count = vertices.size();

  std::vector<std::size_t> pos(assr.state_count(), TransitionGraph::npos);
  for (std::size_t p = 0; p < count; ++p) pos[vertices[p] - 1] = p;

  std::vector<std::vector<Edge>> edges(count);
  std::vector<std::vector<Action>> actions(count);
  std::vector<bool> discovered(count, false);
  std::deque<std::size_t> frontier;
  std::size_t pairs = 0;

  // Every vertex is a BFS root in ascending order so unreachable parts of the
  // region are covered too.
  for (std::size_t root = 0; root < count; ++root) {
    if (discovered[root]) continue;
    discovered[root] = true;
    frontier.push_back(root);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      const std::size_t x = vertices[p];
      auto& out = edges[p];
      for (auto u : region.inputs(x)) {
        ++pairs;
        const std::size_t y = assr.next(x, u);
        const std::size_t q = pos[y - 1];
        if (q == TransitionGraph::npos) {
          throw InternalError("region input leads outside the region");
        }
        const double g = stage_cost(cost, x, u, n, m);
        actions[p].push_back({u, q, g});
        // Inputs arrive in ascending order, so keeping strict improvements only
        // leaves the smallest minimizing input on the edge.
        auto it = std::find_if(out.begin(), out.end(), [q](const Edge& e) { return e.successor_pos == q; });
        if (it == out.end()) {
          out.push_back({q, g, u});
        } else if (g < it->weight) {
          it->weight = g;
          it->best_input = u;
        }
        if (!discovered[q]) {
          discovered[q] = true;
          frontier.push_back(q);
        }
      }
      std::sort(out.begin(), out.end(),
                [](const Edge& a, const Edge& b) { return a.successor_pos < b.successor_pos; });
    }
  }
  if (stats) stats->pairs_visited = pairs;
  return TransitionGraph(assr.state_count(), assr.input_count(), vertices, std::move(edges),
                         std::move(actions));
}

std::vector<std::size_t> admissible_inputs(const Assr& assr, const FeasibleRegion& region, std::size_t x,
                                           std::size_t x_next) {
  if (!region.contains(x)) throw InvalidArgument("state " + std::to_string(x) + " is not in the region");
  std::vector<std::size_t> out;
  for (auto u : region.inputs(x))
    if (assr.next(x, u) == x_next) out.push_back(u);
  return out;
}

void write_dot(std::ostream& out, const TransitionGraph& graph) {
  char weight[32];
  out << "digraph stg {\n";
  for (auto s : graph.vertices()) out << "  \"" << s << "\";\n";
  for (std::size_t p = 0; p < graph.size(); ++p) {
    for (const auto& e : graph.edges(p)) {
      std::snprintf(weight, sizeof weight, "%.9g", e.weight);
      out << "  \"" << graph.state(p) << "\" -> \"" << graph.state(e.successor_pos) << "\" [label=\""
          << weight << '/' << e.best_input << "\"];\n";
    }
  }
  out << "}\n";
}

}  // namespace bcnopt
