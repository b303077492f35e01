#include "bcnopt/expr.hpp"

#include <algorithm>
#include <cctype>

#include "bcnopt/errors.hpp"

namespace bcnopt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or:
      return 1;
    case BinaryOp::Xor:
      return 2;
    case BinaryOp::And:
      return 3;
  }
  return 0;
}

char symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::And:
      return '&';
    case BinaryOp::Or:
      return '|';
    case BinaryOp::Xor:
      return '^';
  }
  return '?';
}

constexpr int kUnaryPrecedence = 4;

int precedence(const BoolExpr::Node& node) {
  if (const auto* b = std::get_if<BinaryNode>(&node)) return precedence(b->op);
  if (std::holds_alternative<NotNode>(node)) return kUnaryPrecedence;
  return kUnaryPrecedence + 1;
}

void collect_variables(const BoolExpr& e, std::vector<std::string>& out) {
  std::visit(overloaded{
                 [&](const VarNode& v) {
                   if (std::find(out.begin(), out.end(), v.name) == out.end()) out.push_back(v.name);
                 },
                 [](const ConstNode&) {},
                 [&](const NotNode& n) { collect_variables(n.operand, out); },
                 [&](const BinaryNode& b) {
                   collect_variables(b.lhs, out);
                   collect_variables(b.rhs, out);
                 },
             },
             e.node());
}

void render(const BoolExpr& e, std::string& out) {
  auto child = [&out](const BoolExpr& c, bool parens) {
    if (parens) out += '(';
    render(c, out);
    if (parens) out += ')';
  };
  std::visit(overloaded{
                 [&](const VarNode& v) { out += v.name; },
                 [&](const ConstNode& c) { out += c.value ? '1' : '0'; },
                 [&](const NotNode& n) {
                   out += '!';
                   child(n.operand, precedence(n.operand.node()) < kUnaryPrecedence);
                 },
                 [&](const BinaryNode& b) {
                   const int p = precedence(b.op);
                   child(b.lhs, precedence(b.lhs.node()) < p);
                   out += ' ';
                   out += symbol(b.op);
                   out += ' ';
                   child(b.rhs, precedence(b.rhs.node()) <= p);
                 },
             },
             e.node());
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BoolExpr parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    BoolExpr e = parse_or();
    skip_space();
    if (!at_end()) {
      if (text_[pos_] == ')') fail("unbalanced ')'");
      fail(std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  BoolExpr parse_or() {
    BoolExpr lhs = parse_xor();
    while (accept('|')) lhs = BoolExpr::binary(BinaryOp::Or, lhs, parse_xor());
    return lhs;
  }

  BoolExpr parse_xor() {
    BoolExpr lhs = parse_and();
    while (accept('^')) lhs = BoolExpr::binary(BinaryOp::Xor, lhs, parse_and());
    return lhs;
  }

  BoolExpr parse_and() {
    BoolExpr lhs = parse_unary();
    while (accept('&')) lhs = BoolExpr::binary(BinaryOp::And, lhs, parse_unary());
    return lhs;
  }

  BoolExpr parse_unary() {
    if (accept('!')) return BoolExpr::negate(parse_unary());
    return parse_primary();
  }

  BoolExpr parse_primary() {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      BoolExpr inner = parse_or();
      skip_space();
      if (at_end() || text_[pos_] != ')') {
        throw ParseError("unbalanced '(' opened at column " + std::to_string(open + 1), open + 1);
      }
      ++pos_;
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      if (!at_end() && is_ident_char(text_[pos_])) fail("malformed constant");
      return BoolExpr::constant(c == '1');
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (!at_end() && is_ident_char(text_[pos_])) ++pos_;
      return BoolExpr::var(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == ')') fail("unbalanced ')'");
    fail(std::string("unknown token '") + c + "'");
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1), pos_ + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BoolExpr BoolExpr::var(std::string name) {
  return BoolExpr(std::make_shared<const ExprNode>(ExprNode{VarNode{std::move(name)}}));
}

BoolExpr BoolExpr::constant(bool value) {
  return BoolExpr(std::make_shared<const ExprNode>(ExprNode{ConstNode{value}}));
}

BoolExpr BoolExpr::negate(BoolExpr operand) {
  return BoolExpr(std::make_shared<const ExprNode>(ExprNode{NotNode{std::move(operand)}}));
}

BoolExpr BoolExpr::binary(BinaryOp op, BoolExpr lhs, BoolExpr rhs) {
  return BoolExpr(std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(lhs), std::move(rhs)}}));
}

std::vector<std::string> BoolExpr::variables() const {
  std::vector<std::string> out;
  collect_variables(*this, out);
  return out;
}

std::string BoolExpr::to_string() const {
  std::string out;
  render(*this, out);
  return out;
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node_ == b.node_) return true;
  const BoolExpr::Node& x = a.node();
  const BoolExpr::Node& y = b.node();
  if (x.index() != y.index()) return false;
  return std::visit(overloaded{
                        [&](const VarNode& v) { return v.name == std::get<VarNode>(y).name; },
                        [&](const ConstNode& c) { return c.value == std::get<ConstNode>(y).value; },
                        [&](const NotNode& n) { return n.operand == std::get<NotNode>(y).operand; },
                        [&](const BinaryNode& l) {
                          const auto& r = std::get<BinaryNode>(y);
                          return l.op == r.op && l.lhs == r.lhs && l.rhs == r.rhs;
                        },
                    },
                    x);
}

BoolExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

bool eval_expr(const BoolExpr& e, const std::unordered_map<std::string, bool>& env) {
  return std::visit(overloaded{
                        [&](const VarNode& v) {
                          auto it = env.find(v.name);
                          if (it == env.end()) throw NameError(v.name);
                          return it->second;
                        },
                        [](const ConstNode& c) { return c.value; },
                        [&](const NotNode& n) { return !eval_expr(n.operand, env); },
                        [&](const BinaryNode& b) {
                          const bool l = eval_expr(b.lhs, env);
                          const bool r = eval_expr(b.rhs, env);
                          switch (b.op) {
                            case BinaryOp::And:
                              return l && r;
                            case BinaryOp::Or:
                              return l || r;
                            case BinaryOp::Xor:
                              return l != r;
                          }
                          return false;
                        },
                    },
                    e.node());
}

CompiledExpr::CompiledExpr(const BoolExpr& e, std::span<const std::string> vars) {
  // Post-order emission; depth tracks the evaluation stack high-water mark.
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const BoolExpr& x) -> void {
    std::visit(overloaded{
                   [&](const VarNode& v) {
                     auto it = std::find(vars.begin(), vars.end(), v.name);
                     if (it == vars.end()) throw NameError(v.name);
                     program_.push_back({Code::PushVar, static_cast<std::uint32_t>(it - vars.begin())});
                     max_depth_ = std::max(max_depth_, ++depth);
                   },
                   [&](const ConstNode& c) {
                     program_.push_back({Code::PushConst, c.value ? 1u : 0u});
                     max_depth_ = std::max(max_depth_, ++depth);
                   },
                   [&](const NotNode& n) {
                     self(self, n.operand);
                     program_.push_back({Code::Not, 0});
                   },
                   [&](const BinaryNode& b) {
                     self(self, b.lhs);
                     self(self, b.rhs);
                     const Code code = b.op == BinaryOp::And  ? Code::And
                                       : b.op == BinaryOp::Or ? Code::Or
                                                              : Code::Xor;
                     program_.push_back({code, 0});
                     --depth;
                   },
               },
               x.node());
  };
  emit(emit, e);
}

bool CompiledExpr::operator()(std::span<const std::uint8_t> values) const {
  constexpr std::size_t kInline = 64;
  std::uint8_t inline_stack[kInline]{};
  std::vector<std::uint8_t> heap_stack;
  std::uint8_t* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const auto& ins : program_) {
    switch (ins.code) {
      case Code::PushVar:
        stack[top++] = values[ins.arg] ? 1 : 0;
        break;
      case Code::PushConst:
        stack[top++] = static_cast<std::uint8_t>(ins.arg);
        break;
      case Code::Not:
        stack[top - 1] ^= 1;
        break;
      case Code::And:
        --top;
        stack[top - 1] &= stack[top];
        break;
      case Code::Or:
        --top;
        stack[top - 1] |= stack[top];
        break;
      case Code::Xor:
        --top;
        stack[top - 1] ^= stack[top];
        break;
    }
  }
  return stack[0] != 0;
}

LogicalMatrix structure_matrix(const BoolExpr& e, std::span<const std::string> ordered_vars) {
  const std::size_t k = ordered_vars.size();
  if (k > 30) throw InvalidArgument("structure matrix over more than 30 variables");
  const CompiledExpr f(e, ordered_vars);
  const std::size_t columns = std::size_t{1} << k;
  std::vector<std::uint8_t> bits(k);
  std::vector<std::size_t> cols(columns);
  for (std::size_t c = 1; c <= columns; ++c) {
    decode_bits(c, bits);
    cols[c - 1] = f(bits) ? 2 : 1;
  }
  return LogicalMatrix(2, std::move(cols));
}

}  // namespace bcnopt
