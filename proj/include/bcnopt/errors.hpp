#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcnopt {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Syntax error in a Boolean expression or a malformed network file.
// `position` is the 1-based column for expressions, or the 1-based line for
// files (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Reference to a variable that is not bound in the evaluation environment.
class NameError : public Error {
 public:
  explicit NameError(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// No state of the constrained system can evolve indefinitely.
class InfeasibleProblem : public Error {
 public:
  using Error::Error;
};

// The brute-force oracle refuses instances beyond its budget.
class OracleRefused : public Error {
 public:
  using Error::Error;
};

// A broken invariant inside the library (e.g. a policy leaving the region).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcnopt
