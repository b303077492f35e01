#pragma once

// Boolean expressions used to write the update functions of a network.
//
// Grammar (lowest to highest precedence, binary operators left-associative):
//
//     expr    := xor   ( '|' xor   )*
//     xor     := and   ( '^' and   )*
//     and     := unary ( '&' unary )*
//     unary   := '!' unary | primary
//     primary := IDENT | '0' | '1' | '(' expr ')'
//     IDENT   := [A-Za-z_][A-Za-z0-9_+-]*
//
// Identifiers may end in '+' or '-' so names such as "Ara+" are legal.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bcnopt/logic.hpp"

namespace bcnopt {

enum class BinaryOp { And, Or, Xor };

class BoolExpr;

struct VarNode {
  std::string name;
};
struct ConstNode {
  bool value;
};
struct NotNode;
struct BinaryNode;
struct ExprNode;

// Immutable expression tree; copies share structure.
class BoolExpr {
 public:
  using Node = std::variant<VarNode, ConstNode, NotNode, BinaryNode>;

  static BoolExpr var(std::string name);
  static BoolExpr constant(bool value);
  static BoolExpr negate(BoolExpr operand);
  static BoolExpr binary(BinaryOp op, BoolExpr lhs, BoolExpr rhs);

  const Node& node() const noexcept;

  // Distinct variable names in order of first appearance.
  std::vector<std::string> variables() const;

  // Rendering with the minimal parentheses; parse_expr(to_string()) == *this.
  std::string to_string() const;

  friend bool operator==(const BoolExpr& a, const BoolExpr& b);

 private:
  explicit BoolExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct NotNode {
  BoolExpr operand;
};
struct BinaryNode {
  BinaryOp op;
  BoolExpr lhs;
  BoolExpr rhs;
};
struct ExprNode {
  BoolExpr::Node value;
};

inline const BoolExpr::Node& BoolExpr::node() const noexcept { return node_->value; }

BoolExpr parse_expr(std::string_view text);

bool eval_expr(const BoolExpr& e, const std::unordered_map<std::string, bool>& env);

// Expression with variables resolved to slots of a fixed variable list,
// evaluated without lookups. Used where the same function is evaluated for
// every assignment of a truth table.
class CompiledExpr {
 public:
  // Throws NameError if the expression references a name not in `vars`.
  CompiledExpr(const BoolExpr& e, std::span<const std::string> vars);

  bool operator()(std::span<const std::uint8_t> values) const;

 private:
  enum class Code : std::uint8_t { PushVar, PushConst, Not, And, Or, Xor };
  struct Instr {
    Code code;
    std::uint32_t arg;
  };
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
};

// Structure matrix M_f in L_{2 x 2^k} such that f(x_1..x_k) = M_f x_1 ... x_k.
// Column encode_state(bits) holds delta_2^{1 + f(bits)}.
LogicalMatrix structure_matrix(const BoolExpr& e, std::span<const std::string> ordered_vars);

}  // namespace bcnopt
