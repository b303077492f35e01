#include "bcnopt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bcnopt/errors.hpp"
#include "bcnopt/io.hpp"
#include "bcnopt/network.hpp"
#include "bcnopt/solvers.hpp"
#include "bcnopt/stg.hpp"

namespace bcnopt::cli {

namespace {

struct Problem {
  BooleanNetwork net;
  Assr assr;
  FeasibleRegion region;
  TransitionGraph graph;
};

Problem load_problem(const std::filesystem::path& path) {
  BooleanNetwork net = load_network(path);
  Assr assr = build_assr(net);
  FeasibleRegion region = feasible_region(assr, net.constraints);
  TransitionGraph graph = build_stg(assr, net.cost, region);
  return {std::move(net), std::move(assr), std::move(region), std::move(graph)};
}

std::string bit_string(std::size_t index, std::size_t n) {
  std::string s(n, '0');
  std::size_t v = index - 1;
  for (std::size_t k = n; k-- > 0; v >>= 1) s[k] = (v & 1u) ? '1' : '0';
  return s;
}

void emit(const CommandRequest& req, std::ostream& out, const std::string& content) {
  if (req.output) {
    write_file_atomic(*req.output, content);
  } else {
    out << content;
  }
}

// Runs a command body, mapping exceptions to exit codes. Nothing is written to
// the output path unless the body completes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InfeasibleProblem& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

struct SolveOutcome {
  ValueTable values;
  Policy policy;
  std::optional<std::size_t> iterations;
  bool converged = true;
};

SolveOutcome solve(const Problem& p, const CommandRequest& req) {
  SolveOutcome s;
  if (req.algorithm == Algorithm::Madani) {
    if (!(req.lambda > 0.0 && req.lambda < 1.0)) throw InvalidArgument("--lambda must lie in (0, 1)");
    s.values = madani(p.graph, req.lambda, false, req.threads).values;
  } else {
    if (!req.theta) throw InvalidArgument("value iteration requires --theta");
    SolverConfig cfg;
    cfg.lambda = req.lambda;
    cfg.theta = *req.theta;
    cfg.max_iterations = req.max_iterations;
    cfg.order = req.jacobi ? SweepOrder::Jacobi : SweepOrder::GaussSeidel;
    auto r = value_iteration(p.graph, cfg);
    s.values = std::move(r.values);
    s.iterations = r.iterations;
    s.converged = r.converged;
  }
  s.policy = extract_policy(p.graph, s.values, req.lambda);
  return s;
}

}  // namespace

std::size_t parse_state(const std::string& text, std::size_t n) {
  const std::size_t big_n = std::size_t{1} << n;
  const bool bits = n >= 2 && text.size() == n &&
                    std::all_of(text.begin(), text.end(), [](char c) { return c == '0' || c == '1'; });
  if (bits) {
    std::vector<bool> b(n);
    for (std::size_t k = 0; k < n; ++k) b[k] = text[k] == '1';
    return encode_state(b).index();
  }
  std::size_t consumed = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (text.empty() || consumed != text.size() || value < 1 || value > big_n) {
    throw InvalidArgument("'" + text + "' is neither a state index in [1, " + std::to_string(big_n) +
                          "] nor a " + std::to_string(n) + "-bit state string");
  }
  return static_cast<std::size_t>(value);
}

int cmd_solve(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Problem p = load_problem(req.network);
    std::optional<std::size_t> x0;
    if (req.x0) {
      x0 = parse_state(*req.x0, p.net.num_states());
      if (!p.region.contains(*x0)) throw InvalidArgument("x0 = " + std::to_string(*x0) + " is outside the admissible region");
    }
    const SolveOutcome s = solve(p, req);
    const LogicalMatrix k = feedback_matrix(p.graph, s.policy);

    std::string content;
    if (req.format == OutputFormat::Json) {
      SolutionReport report;
      report.lambda = req.lambda;
      report.algorithm = req.algorithm == Algorithm::Madani ? "madani" : "vi";
      for (std::size_t i = 0; i < p.graph.size(); ++i) {
        report.values[p.graph.state(i)] = s.values[i];
        report.policy[p.graph.state(i)] = s.policy[i];
      }
      report.feedback_columns.assign(k.columns().begin(), k.columns().end());
      report.iterations = s.iterations;
      if (x0) {
        report.x0 = x0;
        report.optimal_cost_at_x0 = s.values[p.graph.position(*x0)];
      }
      content = dump_solution(report);
    } else {
      std::ostringstream csv;
      csv << "state_index,state_bits,value,input_index\n";
      for (std::size_t i = 0; i < p.graph.size(); ++i) {
        const std::size_t x = p.graph.state(i);
        csv << x << ',' << bit_string(x, p.net.num_states()) << ',' << format_number(s.values[i]) << ','
            << s.policy[i] << '\n';
      }
      content = csv.str();
    }
    emit(req, out, content);

    std::ostream& summary = req.output ? out : err;
    if (s.iterations) {
      summary << "iterations: " << *s.iterations << (s.converged ? "" : " (not converged)") << '\n';
    }
    if (x0) summary << "optimal cost at x0: " << format_number(s.values[p.graph.position(*x0)]) << '\n';
    return kExitOk;
  });
}

int cmd_simulate(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BooleanNetwork net = load_network(req.network);
    const Assr assr = build_assr(net);
    const FeasibleRegion region = feasible_region(assr, net.constraints);
    const SolutionReport report = parse_solution(read_file(req.policy));
    if (report.feedback_columns.size() != assr.state_count()) {
      throw ValidationError("policy file has " + std::to_string(report.feedback_columns.size()) +
                            " feedback columns, the network has " + std::to_string(assr.state_count()) + " states");
    }
    const LogicalMatrix k(assr.input_count(), report.feedback_columns);

    std::size_t x0 = 0;
    if (req.x0) {
      x0 = parse_state(*req.x0, net.num_states());
    } else if (report.x0) {
      x0 = *report.x0;
    } else {
      throw InvalidArgument("simulate needs --x0");
    }
    Horizon horizon = TailBound{req.epsilon.value_or(1e-6)};
    if (req.horizon) horizon = FixedHorizon{*req.horizon};
    const RolloutResult r = rollout(assr, net.cost, region, k, x0, report.lambda, horizon);

    std::ostringstream csv;
    csv << "t,state_index,state_bits,input_index,stage_cost,discounted_cumulative\n";
    double cumulative = 0.0;
    double discount = 1.0;
    for (std::size_t t = 0; t < r.horizon; ++t) {
      cumulative += discount * r.costs[t];
      discount *= report.lambda;
      csv << t << ',' << r.states[t] << ',' << bit_string(r.states[t], net.num_states()) << ',' << r.inputs[t] << ','
          << format_number(r.costs[t]) << ',' << format_number(cumulative) << '\n';
    }
    emit(req, out, csv.str());
    std::ostream& summary = req.output ? out : err;
    summary << "horizon: " << r.horizon << '\n' << "discounted cost: " << format_number(r.discounted_cost) << '\n';
    return kExitOk;
  });
}

int cmd_assr(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Assr assr = build_assr(load_network(req.network));
    std::string line;
    for (std::size_t k = 0; k < assr.table().size(); ++k) {
      if (k) line += ',';
      line += std::to_string(assr.table()[k]);
    }
    line += '\n';
    emit(req, out, line);
    return kExitOk;
  });
}

int cmd_stg(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Problem p = load_problem(req.network);
    std::ostringstream dot;
    write_dot(dot, p.graph);
    emit(req, out, dot.str());
    return kExitOk;
  });
}

int cmd_bench(const CommandRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    using Clock = std::chrono::steady_clock;
    auto seconds = [](Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };

    const auto expected = nlohmann::json::parse(read_file(req.data_dir / "ara_expected.json"));
    const auto network_file = req.data_dir / expected.at("network").get<std::string>();
    const double lambda = expected.at("lambda").get<double>();
    const std::size_t x0 = expected.at("x0").get<std::size_t>();
    bool ok = true;

    const auto t0 = Clock::now();
    const Problem p = load_problem(network_file);
    const auto t1 = Clock::now();
    const std::size_t pos = p.graph.position(x0);
    if (pos == TransitionGraph::npos) throw InvalidArgument("benchmark x0 is not admissible");

    out << "network: " << network_file.filename().string() << " (N = " << p.assr.state_count()
        << ", M = " << p.assr.input_count() << ", |V| = " << p.graph.size() << ", |E| = " << p.graph.edge_count()
        << ")\n";
    out << "build ASSR + STG: " << format_number(seconds(t0, t1)) << " s\n";

    const auto t2 = Clock::now();
    const auto exact = madani(p.graph, lambda, false, req.threads).values;
    const auto policy = extract_policy(p.graph, exact, lambda);
    const auto t3 = Clock::now();
    out << "madani: v*(x0) = " << format_number(exact[pos]) << ", " << format_number(seconds(t2, t3)) << " s\n";

    const double stored = expected.at("optimum").get<double>();
    if (std::abs(exact[pos] - stored) > 1e-6) {
      out << "MISMATCH: stored optimum is " << format_number(stored) << '\n';
      ok = false;
    }
    const double published = expected.at("published_optimum").get<double>();
    const double published_tol = expected.at("published_optimum_tolerance").get<double>();
    out << "published optimum " << format_number(published) << ": "
        << (std::abs(exact[pos] - published) <= published_tol ? "reproduced" : "not reproduced") << '\n';

    const auto thresholds = expected.at("vi_thresholds").get<std::vector<double>>();
    const auto stored_iters = expected.at("vi_iterations").get<std::vector<std::size_t>>();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      SolverConfig cfg;
      cfg.lambda = lambda;
      cfg.theta = thresholds[i];
      const auto a = Clock::now();
      const auto r = value_iteration(p.graph, cfg);
      const auto b = Clock::now();
      out << "vi theta=" << format_number(thresholds[i]) << ": " << r.iterations << " sweeps, V(x0) = "
          << format_number(r.values[pos]) << ", " << format_number(seconds(a, b)) << " s\n";
      if (i < stored_iters.size() && stored_iters[i] != r.iterations) {
        out << "MISMATCH: stored sweep count is " << stored_iters[i] << '\n';
        ok = false;
      }
    }

    SolverConfig fine;
    fine.lambda = lambda;
    fine.theta = 1e-12;
    const auto vi = value_iteration(p.graph, fine);
    double gap = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) gap = std::max(gap, std::abs(vi.values[i] - exact[i]));
    out << "vi theta=1e-12 vs madani: max |difference| = " << format_number(gap) << '\n';
    if (gap > 1e-6) ok = false;

    const auto k = feedback_matrix(p.graph, policy);
    const auto roll = rollout(p.assr, p.net.cost, p.region, k, x0, lambda, TailBound{1e-6});
    out << "closed-loop cost from x0: " << format_number(roll.discounted_cost) << " (T = " << roll.horizon << ")\n";
    if (std::abs(roll.discounted_cost - exact[pos]) > 1e-6) ok = false;

    out << (ok ? "bench: OK" : "bench: FAILED") << '\n';
    return ok ? kExitOk : kExitError;
  });
}

}  // namespace bcnopt::cli
