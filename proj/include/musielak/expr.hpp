#pragma once

// Expression language for functions of (t, u) and named parameters.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
//
// `^` is right-associative and binds tighter than unary minus, so "-u^2"
// is -(u^2) and "a^-b" is a^(-b).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "musielak/error.hpp"

namespace musielak::dsl {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Abs, Exp, Log, Max, Min };

enum class VarKind { T, U, Param };

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  VarKind var = VarKind::Param;
  std::string name;         // variable or parameter name
  std::size_t offset = 0;   // byte offset in the source text
  std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

using ParamMap = std::map<std::string, double, std::less<>>;

/// Which free names a parse accepts besides function names.
struct Grammar {
  bool allow_t = true;
  bool allow_u = true;
  std::vector<std::string> params;
};

namespace detail {

inline NodePtr make_node(Op op, std::size_t offset, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->offset = offset;
  n->args = std::move(args);
  return n;
}

inline NodePtr make_const(double v, std::size_t offset = 0) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  n->offset = offset;
  return n;
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Abs: return "abs";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Max: return "max";
    case Op::Min: return "min";
    default: return "";
  }
}

inline int function_arity(std::string_view name, Op& op) {
  if (name == "abs") { op = Op::Abs; return 1; }
  if (name == "exp") { op = Op::Exp; return 1; }
  if (name == "log") { op = Op::Log; return 1; }
  if (name == "max") { op = Op::Max; return 2; }
  if (name == "min") { op = Op::Min; return 2; }
  return 0;
}

class Parser {
 public:
  Parser(std::string_view text, const Grammar& grammar) : text_(text), grammar_(grammar) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('+')) { NodePtr rhs = term(); lhs = make_node(Op::Add, at, {lhs, rhs}); }
      else if (accept('-')) { NodePtr rhs = term(); lhs = make_node(Op::Sub, at, {lhs, rhs}); }
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      std::size_t at = pos_;
      if (accept('*')) { NodePtr rhs = factor(); lhs = make_node(Op::Mul, at, {lhs, rhs}); }
      else if (accept('/')) { NodePtr rhs = factor(); lhs = make_node(Op::Div, at, {lhs, rhs}); }
      else return lhs;
    }
  }

  NodePtr factor() {
    skip_ws();
    std::size_t at = pos_;
    if (accept('-')) {
      NodePtr operand = factor();
      return make_node(Op::Neg, at, {operand});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    skip_ws();
    std::size_t at = pos_;
    if (accept('^')) {
      NodePtr exponent = factor();
      return make_node(Op::Pow, at, {base, exponent});
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail({"number", "identifier", "'('", "'-'"});
    const std::size_t at = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && is_ident_char(text_[end])) ++end;
      std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') return call(name, at);
      return variable(name, at);
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  NodePtr number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (end < text_.size() && text_[end] >= '0' && text_[end] <= '9') ++end, ++n;
      return n;
    };
    std::size_t count = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      count += digits();
    }
    if (count == 0) {
      pos_ = end;
      fail({"digit"});
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (digits() == 0) end = save;  // "2e" is 2 followed by identifier e
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + at, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end || !std::isfinite(v)) fail({"finite number"});
    pos_ = end;
    return make_const(v, at);
  }

  NodePtr call(const std::string& name, std::size_t at) {
    Op op = Op::Const;
    const int arity = function_arity(name, op);
    if (arity == 0) throw UnknownIdentifier(at, name);
    accept('(');
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    if (!accept(')')) fail({"','", "')'"});
    if (static_cast<int>(args.size()) != arity) {
      pos_ = at;
      fail({name + " with " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s")});
    }
    return make_node(op, at, std::move(args));
  }

  NodePtr variable(const std::string& name, std::size_t at) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->name = name;
    n->offset = at;
    if (name == "t" && grammar_.allow_t) n->var = VarKind::T;
    else if (name == "u" && grammar_.allow_u) n->var = VarKind::U;
    else if (std::find(grammar_.params.begin(), grammar_.params.end(), name) != grammar_.params.end())
      n->var = VarKind::Param;
    else throw UnknownIdentifier(at, name);
    return n;
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  std::string_view text_;
  const Grammar& grammar_;
  std::size_t pos_ = 0;
};

// Thrown inside the recursive evaluator; collects the node path on the way out.
struct EvalFault {
  DomainError::Reason reason;
  std::string what;
  std::vector<std::size_t> reversed_path;
  std::size_t offset;
};

inline bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

inline double power(double base, double exponent) {
  if (exponent == 2.0) return base * base;
  return std::pow(base, exponent);
}

template <typename Lookup>
double eval_node(const Node& n, double t, double u, const Lookup& lookup) {
  auto child = [&](std::size_t i) -> double {
    try {
      return eval_node(*n.args[i], t, u, lookup);
    } catch (EvalFault& f) {
      f.reversed_path.push_back(i);
      throw;
    }
  };
  auto undefined = [&](const char* what) -> EvalFault {
    return EvalFault{DomainError::Reason::Undefined, what, {}, n.offset};
  };
  double r = 0.0;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (n.var == VarKind::T) return t;
      if (n.var == VarKind::U) return u;
      return lookup(n.name);
    case Op::Neg: return -child(0);
    case Op::Add: r = child(0) + child(1); break;
    case Op::Sub: r = child(0) - child(1); break;
    case Op::Mul: r = child(0) * child(1); break;
    case Op::Div: {
      const double num = child(0);
      const double den = child(1);
      if (den == 0.0) throw undefined("division by zero");
      r = num / den;
      break;
    }
    case Op::Pow: {
      const double base = child(0);
      const double exponent = child(1);
      if (base < 0.0 && !is_integer(exponent)) throw undefined("non-integer power of a negative base");
      if (base == 0.0 && exponent < 0.0) throw undefined("negative power of zero");
      r = power(base, exponent);
      break;
    }
    case Op::Abs: return std::fabs(child(0));
    case Op::Exp: r = std::exp(child(0)); break;
    case Op::Log: {
      const double x = child(0);
      if (!(x > 0.0)) throw undefined("log of a non-positive argument");
      r = std::log(x);
      break;
    }
    case Op::Max: return std::max(child(0), child(1));
    case Op::Min: return std::min(child(0), child(1));
  }
  if (std::isnan(r)) throw undefined("undefined arithmetic");
  if (std::isinf(r)) throw EvalFault{DomainError::Reason::Overflow, "arithmetic", {}, n.offset};
  return r;
}

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

inline void format_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

inline void pretty(const Node& n, std::string& out) {
  auto sub = [&](const Node& c, bool paren) {
    if (paren) out += '(';
    pretty(c, out);
    if (paren) out += ')';
  };
  const int p = precedence(n);
  switch (n.op) {
    case Op::Const:
      if (n.value < 0.0) {
        out += '-';
        format_number(out, -n.value);
      } else {
        format_number(out, n.value);
      }
      return;
    case Op::Var: out += n.name; return;
    case Op::Neg:
      out += '-';
      sub(*n.args[0], precedence(*n.args[0]) < p);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : '/';
      // Left-associative: the right operand needs parentheses at equal precedence.
      sub(*n.args[0], precedence(*n.args[0]) < p);
      out += ' ';
      out += sym;
      out += ' ';
      sub(*n.args[1], precedence(*n.args[1]) <= p);
      return;
    }
    case Op::Pow:
      sub(*n.args[0], precedence(*n.args[0]) <= p);
      out += '^';
      sub(*n.args[1], precedence(*n.args[1]) < 3);
      return;
    default:
      out += function_name(n.op);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i > 0) out += ", ";
        pretty(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

inline bool same_tree(const Node& a, const Node& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Op::Const && a.value != b.value) return false;
  if (a.op == Op::Var && (a.var != b.var || a.name != b.name)) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_tree(*a.args[i], *b.args[i])) return false;
  return true;
}

inline NodePtr substitute(const NodePtr& n, const ParamMap& params) {
  if (n->op == Op::Var && n->var == VarKind::Param) {
    auto it = params.find(n->name);
    if (it == params.end()) return n;
    return make_const(it->second, n->offset);
  }
  if (n->args.empty()) return n;
  auto copy = std::make_shared<Node>(*n);
  for (auto& a : copy->args) a = substitute(a, params);
  return copy;
}

inline void collect_params(const Node& n, std::vector<std::string>& out) {
  if (n.op == Op::Var && n.var == VarKind::Param &&
      std::find(out.begin(), out.end(), n.name) == out.end())
    out.push_back(n.name);
  for (const auto& a : n.args) collect_params(*a, out);
}

}  // namespace detail

/// Immutable parsed expression. Cheap to copy (shared tree).
class Expr {
 public:
  Expr() : root_(detail::make_const(0.0)) {}
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const noexcept { return *root_; }

  /// Canonical text; parses back to a structurally equal tree.
  std::string pretty() const {
    std::string out;
    detail::pretty(*root_, out);
    return out;
  }

  /// Names of the unbound parameters, in order of first appearance.
  std::vector<std::string> parameters() const {
    std::vector<std::string> out;
    detail::collect_params(*root_, out);
    return out;
  }

  /// Replaces bound parameters with constants. Unknown names are ignored.
  Expr bind(const ParamMap& params) const { return Expr(detail::substitute(root_, params)); }

  /// Evaluates an expression with no free parameters.
  double operator()(double t, double u) const {
    return evaluate(t, u, [](std::string_view name) -> double {
      throw UnboundParameter(std::string(name));
    });
  }

  double evaluate(double t, double u, const ParamMap& params) const {
    return evaluate(t, u, [&](std::string_view name) -> double {
      auto it = params.find(name);
      if (it == params.end()) throw UnboundParameter(std::string(name));
      return it->second;
    });
  }

  friend bool operator==(const Expr& a, const Expr& b) { return detail::same_tree(*a.root_, *b.root_); }

 private:
  template <typename Lookup>
  double evaluate(double t, double u, const Lookup& lookup) const {
    try {
      return detail::eval_node(*root_, t, u, lookup);
    } catch (detail::EvalFault& f) {
      std::reverse(f.reversed_path.begin(), f.reversed_path.end());
      throw DomainError(f.reason, f.what, std::move(f.reversed_path), f.offset);
    }
  }

  NodePtr root_;
};

inline Expr parse(std::string_view text, const Grammar& grammar = {}) {
  return Expr(detail::Parser(text, grammar).parse());
}

/// Parses with every name in `params` accepted as a parameter.
inline Expr parse(std::string_view text, const ParamMap& params) {
  Grammar g;
  for (const auto& [name, value] : params) g.params.push_back(name);
  return parse(text, g);
}

inline double eval(const Expr& e, double t, double u, const ParamMap& params = {}) {
  return e.evaluate(t, u, params);
}

// Tree builders, mostly for tests and programmatic construction.
namespace build {
inline Expr num(double v) { return Expr(detail::make_const(v)); }
inline Expr var(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = name == "t" ? VarKind::T : name == "u" ? VarKind::U : VarKind::Param;
  n->name = std::move(name);
  return Expr(n);
}
inline Expr node(Op op, std::vector<Expr> args) {
  std::vector<NodePtr> ptrs;
  for (const auto& a : args) ptrs.push_back(std::make_shared<Node>(a.root()));
  return Expr(detail::make_node(op, 0, std::move(ptrs)));
}
}  // namespace build

}  // namespace musielak::dsl
