#pragma once

// JSON network files and solver reports.
//
// Network file:
//   {
//     "states":    ["A", "Am", ...],            ordered state variables
//     "inputs":    ["Ae", ...],                  ordered input variables
//     "functions": {"A": "Ae & T", ...},         one expression per state
//     "cost":      {"linear": {"A": [...], "B": [...]}} | {"table": [...]},
//     "constraints": {                           optional
//       "allowed_states":   [1-based indices],   or "forbidden_states"
//       "allowed_inputs":   {"<state>": [1-based input indices]}
//     }
//   }

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcnopt/network.hpp"

namespace bcnopt {

// Throws ParseError (with the 1-based line for JSON syntax errors) or
// ValidationError.
BooleanNetwork parse_network(std::string_view text);
std::string dump_network(const BooleanNetwork& net);

BooleanNetwork load_network(const std::filesystem::path& path);
void save_network(const BooleanNetwork& net, const std::filesystem::path& path);

struct SolutionReport {
  double lambda = 0.0;
  std::string algorithm;
  std::map<std::size_t, double> values;       // state index -> value
  std::map<std::size_t, std::size_t> policy;  // state index -> input index
  std::vector<std::size_t> feedback_columns;  // K, length N
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> x0;
  std::optional<double> optimal_cost_at_x0;
};

// Values are written with 9 significant digits so reports are byte-stable.
std::string dump_solution(const SolutionReport& report);
SolutionReport parse_solution(std::string_view text);

// Rounds to 9 significant digits.
double round_significant(double value);
std::string format_number(double value);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bcnopt
