#include "bcnopt/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "bcnopt/errors.hpp"

namespace bcnopt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what, 0);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

std::vector<std::string> name_list(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) field_error(field, "expected an array of names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) field_error(field, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> index_list(const json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of 1-based indices");
  std::vector<std::size_t> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<long long>() < 1) field_error(field, "expected an array of 1-based indices");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

std::size_t parse_index_key(const std::string& key, const std::string& field) {
  std::size_t consumed = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(key, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != key.size() || key.empty() || value < 1) field_error(field, "key '" + key + "' is not a 1-based index");
  return static_cast<std::size_t>(value);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("JSON syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what(),
                     line_of(text, e.byte));
  }
}

}  // namespace

BooleanNetwork parse_network(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("network file must hold a JSON object", 1);

  BooleanNetwork net;
  net.state_names = name_list(require(doc, "states", ""), "states");
  if (auto it = doc.find("inputs"); it != doc.end()) net.input_names = name_list(*it, "inputs");

  const json& functions = require(doc, "functions", "");
  if (!functions.is_object()) field_error("functions", "expected an object mapping state names to expressions");
  for (const auto& [name, value] : functions.items()) {
    if (std::find(net.state_names.begin(), net.state_names.end(), name) == net.state_names.end()) {
      throw ValidationError("function given for unknown state '" + name + "'");
    }
  }
  for (const auto& name : net.state_names) {
    auto it = functions.find(name);
    if (it == functions.end()) throw ValidationError("no function given for state '" + name + "'");
    if (!it->is_string()) field_error("functions." + name, "expected an expression string");
    try {
      net.functions.push_back(parse_expr(it->get<std::string>()));
    } catch (const ParseError& e) {
      throw ParseError("field 'functions." + name + "': " + e.what(), 0);
    }
  }

  const json& cost = require(doc, "cost", "");
  if (!cost.is_object() || cost.size() != 1) field_error("cost", "expected exactly one of 'linear' or 'table'");
  if (auto it = cost.find("linear"); it != cost.end()) {
    LinearCost lin;
    lin.state_weights = number_list(require(*it, "A", "cost.linear."), "cost.linear.A");
    lin.input_weights = it->contains("B") ? number_list((*it)["B"], "cost.linear.B") : std::vector<double>{};
    net.cost = std::move(lin);
  } else if (auto tbl = cost.find("table"); tbl != cost.end()) {
    net.cost = TableCost{number_list(*tbl, "cost.table")};
  } else {
    field_error("cost", "expected exactly one of 'linear' or 'table'");
  }

  if (auto it = doc.find("constraints"); it != doc.end() && !it->is_null()) {
    const json& c = *it;
    if (!c.is_object()) field_error("constraints", "expected an object");
    const bool has_allowed = c.contains("allowed_states");
    const bool has_forbidden = c.contains("forbidden_states");
    if (has_allowed && has_forbidden) {
      throw ValidationError("allowed_states and forbidden_states are mutually exclusive");
    }
    if (has_allowed) {
      net.constraints.allowed_states = index_list(c["allowed_states"], "constraints.allowed_states");
    } else if (has_forbidden) {
      const auto forbidden = index_list(c["forbidden_states"], "constraints.forbidden_states");
      const std::set<std::size_t> drop(forbidden.begin(), forbidden.end());
      if (net.state_names.size() > 24) throw ValidationError("too many state variables (limit 24)");
      const std::size_t big_n = net.state_count();
      for (auto s : drop)
        if (s > big_n) throw ValidationError("forbidden state " + std::to_string(s) + " is out of range");
      std::vector<std::size_t> allowed;
      for (std::size_t s = 1; s <= big_n; ++s)
        if (!drop.count(s)) allowed.push_back(s);
      net.constraints.allowed_states = std::move(allowed);
    }
    if (auto ai = c.find("allowed_inputs"); ai != c.end()) {
      if (!ai->is_object()) field_error("constraints.allowed_inputs", "expected an object");
      for (const auto& [key, value] : ai->items()) {
        const std::string field = "constraints.allowed_inputs." + key;
        net.constraints.allowed_inputs[parse_index_key(key, field)] = index_list(value, field);
      }
    }
  }

  validate(net);
  return net;
}

std::string dump_network(const BooleanNetwork& net) {
  ordered_json doc;
  doc["states"] = net.state_names;
  doc["inputs"] = net.input_names;
  ordered_json functions = ordered_json::object();
  for (std::size_t i = 0; i < net.functions.size(); ++i) functions[net.state_names[i]] = net.functions[i].to_string();
  doc["functions"] = std::move(functions);
  if (const auto* lin = std::get_if<LinearCost>(&net.cost)) {
    doc["cost"]["linear"]["A"] = lin->state_weights;
    doc["cost"]["linear"]["B"] = lin->input_weights;
  } else {
    doc["cost"]["table"] = std::get<TableCost>(net.cost).values;
  }
  const auto& cons = net.constraints;
  if (cons.allowed_states || !cons.allowed_inputs.empty()) {
    ordered_json c = ordered_json::object();
    if (cons.allowed_states) c["allowed_states"] = *cons.allowed_states;
    if (!cons.allowed_inputs.empty()) {
      ordered_json ai = ordered_json::object();
      for (const auto& [state, inputs] : cons.allowed_inputs) ai[std::to_string(state)] = inputs;
      c["allowed_inputs"] = std::move(ai);
    }
    doc["constraints"] = std::move(c);
  }
  return doc.dump(2) + "\n";
}

BooleanNetwork load_network(const std::filesystem::path& path) { return parse_network(read_file(path)); }

void save_network(const BooleanNetwork& net, const std::filesystem::path& path) {
  validate(net);
  write_file_atomic(path, dump_network(net));
}

double round_significant(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string dump_solution(const SolutionReport& report) {
  ordered_json doc;
  doc["lambda"] = report.lambda;
  doc["algorithm"] = report.algorithm;
  ordered_json values = ordered_json::object();
  for (const auto& [state, v] : report.values) values[std::to_string(state)] = round_significant(v);
  doc["values"] = std::move(values);
  ordered_json policy = ordered_json::object();
  for (const auto& [state, u] : report.policy) policy[std::to_string(state)] = u;
  doc["policy"] = std::move(policy);
  doc["K_columns"] = report.feedback_columns;
  if (report.iterations) doc["iterations"] = *report.iterations;
  if (report.x0) doc["x0"] = *report.x0;
  if (report.optimal_cost_at_x0) doc["optimal_cost_at_x0"] = round_significant(*report.optimal_cost_at_x0);
  return doc.dump(2) + "\n";
}

SolutionReport parse_solution(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("solution file must hold a JSON object", 1);
  SolutionReport r;
  const json& lambda = require(doc, "lambda", "");
  if (!lambda.is_number()) field_error("lambda", "expected a number");
  r.lambda = lambda.get<double>();
  if (auto it = doc.find("algorithm"); it != doc.end() && it->is_string()) r.algorithm = it->get<std::string>();
  if (auto it = doc.find("values"); it != doc.end()) {
    if (!it->is_object()) field_error("values", "expected an object");
    for (const auto& [key, v] : it->items()) {
      if (!v.is_number()) field_error("values." + key, "expected a number");
      r.values[parse_index_key(key, "values." + key)] = v.get<double>();
    }
  }
  if (auto it = doc.find("policy"); it != doc.end()) {
    if (!it->is_object()) field_error("policy", "expected an object");
    for (const auto& [key, v] : it->items()) {
      if (!v.is_number_integer() || v.get<long long>() < 1) field_error("policy." + key, "expected an input index");
      r.policy[parse_index_key(key, "policy." + key)] = v.get<std::size_t>();
    }
  }
  r.feedback_columns = index_list(require(doc, "K_columns", ""), "K_columns");
  if (auto it = doc.find("iterations"); it != doc.end()) r.iterations = it->get<std::size_t>();
  if (auto it = doc.find("x0"); it != doc.end()) r.x0 = it->get<std::size_t>();
  if (auto it = doc.find("optimal_cost_at_x0"); it != doc.end()) r.optimal_cost_at_x0 = it->get<double>();
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InvalidArgument("failed to write '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidArgument("cannot replace '" + path.string() + "'");
  }
}

}  // namespace bcnopt
