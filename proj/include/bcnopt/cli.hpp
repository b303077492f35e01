#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace bcnopt::cli {

enum class Algorithm { ValueIteration, Madani };
enum class OutputFormat { Json, Csv };

struct CommandRequest {
  std::filesystem::path network;
  Algorithm algorithm = Algorithm::Madani;
  double lambda = 0.5;
  std::optional<double> theta;
  std::size_t max_iterations = 1'000'000;
  bool jacobi = false;
  std::optional<std::string> x0;  // 1-based index or n-character bit-string
  std::optional<std::size_t> horizon;
  std::optional<double> epsilon;
  std::filesystem::path policy;
  std::optional<std::filesystem::path> output;  // stdout when absent
  OutputFormat format = OutputFormat::Json;
  std::filesystem::path data_dir;
  std::size_t threads = 1;
};

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

// A string of exactly n characters from {0, 1} (n >= 2) is read as the state
// bits, anything else as a decimal 1-based index. Decimal indices of an
// n-variable network have fewer than n digits when n >= 2, so the two forms
// never collide. Throws InvalidArgument when out of range.
std::size_t parse_state(const std::string& text, std::size_t n);

int cmd_solve(const CommandRequest& req, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandRequest& req, std::ostream& out, std::ostream& err);
int cmd_assr(const CommandRequest& req, std::ostream& out, std::ostream& err);
int cmd_stg(const CommandRequest& req, std::ostream& out, std::ostream& err);
int cmd_bench(const CommandRequest& req, std::ostream& out, std::ostream& err);

}  // namespace bcnopt::cli
