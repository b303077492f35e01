#pragma once

// Shared helpers for the test suites: a dense-matrix semi-tensor product that
// shares no code with the library, and builders for small hand-made problems.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "bcnopt/logic.hpp"
#include "bcnopt/network.hpp"
#include "bcnopt/stg.hpp"

namespace testing_support {

using Dense = std::vector<std::vector<long long>>;  // row-major

inline Dense dense_zero(std::size_t r, std::size_t c) { return Dense(r, std::vector<long long>(c, 0)); }

inline Dense dense_identity(std::size_t n) {
  Dense m = dense_zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Dense kron(const Dense& a, const Dense& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  Dense k = dense_zero(ar * br, ac * bc);
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t p = 0; p < br; ++p)
        for (std::size_t q = 0; q < bc; ++q) k[i * br + p][j * bc + q] = a[i][j] * b[p][q];
  return k;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  Dense c = dense_zero(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// A x B = (A (x) I_{s/n})(B (x) I_{s/p}) with s = lcm(cols(A), rows(B)).
inline Dense dense_stp(const Dense& a, const Dense& b) {
  const std::size_t n = a[0].size(), p = b.size();
  const std::size_t s = std::lcm(n, p);
  return matmul(kron(a, dense_identity(s / n)), kron(b, dense_identity(s / p)));
}

inline Dense to_dense(const bcnopt::LogicalMatrix& m) {
  Dense d = dense_zero(m.rows(), m.cols());
  for (std::size_t j = 1; j <= m.cols(); ++j) d[m.column(j) - 1][j - 1] = 1;
  return d;
}

inline Dense to_dense(const bcnopt::CanonicalVector& v) {
  Dense d = dense_zero(v.dim(), 1);
  d[v.index() - 1][0] = 1;
  return d;
}

// Column indices of a dense logical matrix; empty if some column is not canonical.
inline std::optional<std::vector<std::size_t>> logical_columns(const Dense& d) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < d[0].size(); ++j) {
    std::size_t hit = 0, ones = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i][j] == 1) {
        hit = i + 1;
        ++ones;
      } else if (d[i][j] != 0) {
        return std::nullopt;
      }
    }
    if (ones != 1) return std::nullopt;
    cols.push_back(hit);
  }
  return cols;
}

inline bcnopt::LogicalMatrix random_logical(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::size_t> pick(1, rows);
  std::vector<std::size_t> c(cols);
  for (auto& x : c) x = pick(rng);
  return bcnopt::LogicalMatrix(rows, std::move(c));
}

// A problem given directly by its transition table and cost table.
struct Problem {
  bcnopt::Assr assr;
  bcnopt::StageCostSpec cost;
  bcnopt::FeasibleRegion region;
  bcnopt::TransitionGraph graph;
};

inline Problem make_problem(std::size_t n, std::size_t m, std::vector<std::uint32_t> next, std::vector<double> costs,
                            bcnopt::ConstraintSpec cons = {}) {
  bcnopt::Assr assr(n, m, std::move(next));
  bcnopt::StageCostSpec cost = bcnopt::TableCost{std::move(costs)};
  bcnopt::FeasibleRegion region = bcnopt::feasible_region(assr, cons);
  bcnopt::TransitionGraph graph = bcnopt::build_stg(assr, cost, region);
  return {std::move(assr), std::move(cost), std::move(region), std::move(graph)};
}

inline Problem make_problem(const bcnopt::BooleanNetwork& net) {
  bcnopt::Assr assr = bcnopt::build_assr(net);
  bcnopt::FeasibleRegion region = bcnopt::feasible_region(assr, net.constraints);
  bcnopt::TransitionGraph graph = bcnopt::build_stg(assr, net.cost, region);
  return {std::move(assr), net.cost, std::move(region), std::move(graph)};
}

// One state (n = 1, only state 1 admissible) looping on itself with cost c.
inline Problem self_loop(double c) {
  bcnopt::ConstraintSpec cons;
  cons.allowed_states = std::vector<std::size_t>{1};
  return make_problem(1, 0, {1, 2}, {c, 0.0}, cons);
}

// State 1: self-loop w = 1.2 under u = 1, edge to 2 with w = 0 under u = 2.
// State 2: self-loop w = 2 under both inputs.
inline Problem two_option() { return make_problem(1, 1, {1, 2, 2, 2}, {1.2, 2.0, 0.0, 2.0}); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(const std::vector<double>& a) {
  double d = 0.0;
  for (double x : a) d = std::max(d, std::abs(x));
  return d;
}

}  // namespace testing_support
