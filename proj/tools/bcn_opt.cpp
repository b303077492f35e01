// bcn-opt: discounted-cost optimal control of Boolean control networks.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "bcnopt/cli.hpp"

namespace {

std::size_t threads_from_env() {
  if (const char* env = std::getenv("BCN_OPT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring BCN_OPT_THREADS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using bcnopt::cli::Algorithm;
  using bcnopt::cli::CommandRequest;
  using bcnopt::cli::OutputFormat;

  CLI::App app{"Discounted-cost optimal control of Boolean control networks"};
  app.require_subcommand(1);

  CommandRequest req;
  req.data_dir = BCNOPT_DATA_DIR;
  req.threads = threads_from_env();
  std::string x0;
  std::string output;

  const std::map<std::string, Algorithm> algorithms{{"vi", Algorithm::ValueIteration}, {"madani", Algorithm::Madani}};
  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

  auto* solve = app.add_subcommand("solve", "Compute optimal values, policy and feedback matrix");
  solve->add_option("--network", req.network, "Network JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--algorithm", req.algorithm, "vi | madani")
      ->transform(CLI::CheckedTransformer(algorithms, CLI::ignore_case));
  solve->add_option("--lambda", req.lambda, "Discount factor in (0, 1)");
  solve->add_option("--theta", req.theta, "Value-iteration stopping threshold");
  solve->add_option("--max-iterations", req.max_iterations, "Value-iteration sweep cap");
  solve->add_flag("--jacobi", req.jacobi, "Synchronous value-iteration sweeps");
  solve->add_option("--x0", x0, "Initial state: 1-based index or bit-string");
  solve->add_option("--output,-o", output, "Output file (stdout when omitted)");
  solve->add_option("--format", req.format, "json | csv")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* simulate = app.add_subcommand("simulate", "Closed-loop trajectory under a solved feedback matrix");
  simulate->add_option("--network", req.network, "Network JSON file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--policy", req.policy, "Output file of 'solve'")->required()->check(CLI::ExistingFile);
  simulate->add_option("--x0", x0, "Initial state: 1-based index or bit-string");
  auto* horizon = simulate->add_option("--horizon,-T", req.horizon, "Number of steps");
  simulate->add_option("--epsilon", req.epsilon, "Tail bound on the neglected cost (default 1e-6)")->excludes(horizon);
  simulate->add_option("--output,-o", output, "Trajectory CSV (stdout when omitted)");

  auto* assr = app.add_subcommand("assr", "Dump the transition table of L as CSV");
  assr->add_option("--network", req.network, "Network JSON file")->required()->check(CLI::ExistingFile);
  assr->add_option("--output,-o", output, "Output file (stdout when omitted)");

  auto* stg = app.add_subcommand("stg", "Dump the state transition graph as DOT");
  stg->add_option("--network", req.network, "Network JSON file")->required()->check(CLI::ExistingFile);
  stg->add_option("--output,-o", output, "Output file (stdout when omitted)");

  auto* bench = app.add_subcommand("bench", "Run both solvers on the bundled ara operon network");
  bench->add_option("--data-dir", req.data_dir, "Directory holding the benchmark files")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bcnopt::cli::kExitError;
  }
  if (!x0.empty()) req.x0 = x0;
  if (!output.empty()) req.output = output;

  if (solve->parsed()) return bcnopt::cli::cmd_solve(req, std::cout, std::cerr);
  if (simulate->parsed()) return bcnopt::cli::cmd_simulate(req, std::cout, std::cerr);
  if (assr->parsed()) return bcnopt::cli::cmd_assr(req, std::cout, std::cerr);
  if (stg->parsed()) return bcnopt::cli::cmd_stg(req, std::cout, std::cerr);
  return bcnopt::cli::cmd_bench(req, std::cout, std::cerr);
}
