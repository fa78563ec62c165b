#ifndef HOLAB_EXPR_HPP
#define HOLAB_EXPR_HPP

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holab/error.hpp"
#include "holab/matrix.hpp"

namespace holab {

/// Parse failure with the exact source position.
class parse_error : public error {
public:
  parse_error(const std::string& msg, int line, int col)
      : error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Immutable arithmetic expression over named variables with the functions
/// sin, cos, exp, tanh. Supports evaluation, symbolic differentiation where
/// the rules apply, and printing back to parseable text.
class Expr {
  struct Node;
  using NodeP = std::shared_ptr<const Node>;

  enum class Kind { number, variable, add, sub, mul, div, pow, neg, fun };
  enum class Fun { sin, cos, exp, tanh };

  struct Node {
    Kind kind;
    double value = 0.0;
    int var = -1;
    Fun fun = Fun::sin;
    NodeP a, b;
  };

public:
  Expr() = default;

  static Expr parse(const std::string& src, const std::vector<std::string>& variables) {
    Parser p(src, variables);
    Expr e;
    e.vars_ = variables;
    e.root_ = p.parse_all();
    return e;
  }

  static Expr constant(double v, const std::vector<std::string>& variables) {
    Expr e;
    e.vars_ = variables;
    e.root_ = num(v);
    return e;
  }

  bool valid() const { return root_ != nullptr; }
  const std::vector<std::string>& variables() const { return vars_; }

  double eval(const Vector& values) const {
    if (values.size() != static_cast<Eigen::Index>(vars_.size()))
      throw invalid_argument("Expr::eval: expected " + std::to_string(vars_.size()) +
                             " variable values");
    return eval_node(root_, values);
  }

  /// Symbolic derivative; empty when a rule is missing (variable exponents).
  std::optional<Expr> derivative(int var) const {
    NodeP d = diff(root_, var);
    if (!d) return std::nullopt;
    Expr e;
    e.vars_ = vars_;
    e.root_ = d;
    return e;
  }

  std::string str() const { return print(root_, 0); }

private:
  // --- node builders with light constant folding ---

  static NodeP num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }
  static NodeP variable(int idx) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var = idx;
    return n;
  }
  static bool is_num(const NodeP& n, double v) {
    return n->kind == Kind::number && n->value == v;
  }
  static NodeP binary(Kind k, NodeP a, NodeP b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodeP add(NodeP a, NodeP b) {
    if (is_num(a, 0.0)) return b;
    if (is_num(b, 0.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number) return num(a->value + b->value);
    return binary(Kind::add, std::move(a), std::move(b));
  }
  static NodeP sub(NodeP a, NodeP b) {
    if (is_num(b, 0.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number) return num(a->value - b->value);
    return binary(Kind::sub, std::move(a), std::move(b));
  }
  static NodeP mul(NodeP a, NodeP b) {
    if (is_num(a, 0.0) || is_num(b, 0.0)) return num(0.0);
    if (is_num(a, 1.0)) return b;
    if (is_num(b, 1.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number) return num(a->value * b->value);
    return binary(Kind::mul, std::move(a), std::move(b));
  }
  static NodeP div(NodeP a, NodeP b) {
    if (is_num(a, 0.0) && !is_num(b, 0.0)) return num(0.0);
    if (is_num(b, 1.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number && b->value != 0.0) {
      double q = a->value / b->value;
      if (std::isfinite(q)) return num(q);
    }
    return binary(Kind::div, std::move(a), std::move(b));
  }
  static NodeP pow_node(NodeP a, NodeP b) {
    if (is_num(b, 1.0)) return a;
    if (is_num(b, 0.0)) return num(1.0);
    return binary(Kind::pow, std::move(a), std::move(b));
  }
  static NodeP neg(NodeP a) {
    if (a->kind == Kind::number) return num(-a->value);
    auto n = std::make_shared<Node>();
    n->kind = Kind::neg;
    n->a = std::move(a);
    return n;
  }
  static NodeP fun_node(Fun f, NodeP a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::fun;
    n->fun = f;
    n->a = std::move(a);
    return n;
  }

  // --- evaluation ---

  static double eval_node(const NodeP& n, const Vector& v) {
    switch (n->kind) {
      case Kind::number: return n->value;
      case Kind::variable: return v(n->var);
      case Kind::add: return eval_node(n->a, v) + eval_node(n->b, v);
      case Kind::sub: return eval_node(n->a, v) - eval_node(n->b, v);
      case Kind::mul: return eval_node(n->a, v) * eval_node(n->b, v);
      case Kind::div: return eval_node(n->a, v) / eval_node(n->b, v);
      case Kind::pow: return std::pow(eval_node(n->a, v), eval_node(n->b, v));
      case Kind::neg: return -eval_node(n->a, v);
      case Kind::fun:
        switch (n->fun) {
          case Fun::sin: return std::sin(eval_node(n->a, v));
          case Fun::cos: return std::cos(eval_node(n->a, v));
          case Fun::exp: return std::exp(eval_node(n->a, v));
          case Fun::tanh: return std::tanh(eval_node(n->a, v));
        }
    }
    return 0.0;
  }

  // --- differentiation ---

  static NodeP diff(const NodeP& n, int var) {
    switch (n->kind) {
      case Kind::number: return num(0.0);
      case Kind::variable: return num(n->var == var ? 1.0 : 0.0);
      case Kind::add: {
        NodeP da = diff(n->a, var), db = diff(n->b, var);
        return (da && db) ? add(da, db) : nullptr;
      }
      case Kind::sub: {
        NodeP da = diff(n->a, var), db = diff(n->b, var);
        return (da && db) ? sub(da, db) : nullptr;
      }
      case Kind::mul: {
        NodeP da = diff(n->a, var), db = diff(n->b, var);
        return (da && db) ? add(mul(da, n->b), mul(n->a, db)) : nullptr;
      }
      case Kind::div: {
        NodeP da = diff(n->a, var), db = diff(n->b, var);
        if (!da || !db) return nullptr;
        return div(sub(mul(da, n->b), mul(n->a, db)), pow_node(n->b, num(2.0)));
      }
      case Kind::neg: {
        NodeP da = diff(n->a, var);
        return da ? neg(da) : nullptr;
      }
      case Kind::pow: {
        if (n->b->kind == Kind::number) {
          // d(u^c) = c u^(c-1) u'
          NodeP da = diff(n->a, var);
          if (!da) return nullptr;
          double c = n->b->value;
          return mul(mul(num(c), pow_node(n->a, num(c - 1.0))), da);
        }
        if (n->a->kind == Kind::number && n->a->value > 0.0) {
          // d(a^v) = a^v ln(a) v'
          NodeP db = diff(n->b, var);
          if (!db) return nullptr;
          return mul(mul(binary(Kind::pow, n->a, n->b), num(std::log(n->a->value))), db);
        }
        return nullptr;  // u(x)^v(x): no symbolic rule here
      }
      case Kind::fun: {
        NodeP da = diff(n->a, var);
        if (!da) return nullptr;
        switch (n->fun) {
          case Fun::sin: return mul(fun_node(Fun::cos, n->a), da);
          case Fun::cos: return neg(mul(fun_node(Fun::sin, n->a), da));
          case Fun::exp: return mul(fun_node(Fun::exp, n->a), da);
          case Fun::tanh:
            return mul(sub(num(1.0), pow_node(fun_node(Fun::tanh, n->a), num(2.0))), da);
        }
      }
    }
    return nullptr;
  }

  // --- printing (precedence: add/sub 1, mul/div 2, neg 3, pow 4) ---

  static int precedence(const NodeP& n) {
    switch (n->kind) {
      case Kind::add:
      case Kind::sub: return 1;
      case Kind::mul:
      case Kind::div: return 2;
      case Kind::neg: return 3;
      case Kind::pow: return 4;
      default: return 5;
    }
  }

  std::string print(const NodeP& n, int) const {
    auto wrap = [&](const NodeP& child, int min_prec) {
      std::string s = print(child, 0);
      if (precedence(child) < min_prec) return "(" + s + ")";
      return s;
    };
    switch (n->kind) {
      case Kind::number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n->value);
        std::string s = buf;
        if (!s.empty() && s[0] == '-') return s;  // re-lexes as unary minus
        return s;
      }
      case Kind::variable: return vars_.at(static_cast<size_t>(n->var));
      case Kind::add: return wrap(n->a, 1) + "+" + wrap(n->b, 2);
      case Kind::sub: return wrap(n->a, 1) + "-" + wrap(n->b, 2);
      case Kind::mul: return wrap(n->a, 2) + "*" + wrap(n->b, 3);
      case Kind::div: return wrap(n->a, 2) + "/" + wrap(n->b, 3);
      case Kind::neg: return "-" + wrap(n->a, 3);
      case Kind::pow: return wrap(n->a, 5) + "^" + wrap(n->b, 3);
      case Kind::fun: {
        const char* names[] = {"sin", "cos", "exp", "tanh"};
        return std::string(names[static_cast<int>(n->fun)]) + "(" + print(n->a, 0) + ")";
      }
    }
    return "";
  }

  // --- recursive-descent parser ---

  class Parser {
  public:
    Parser(const std::string& src, const std::vector<std::string>& vars)
        : src_(src), vars_(vars) {}

    NodeP parse_all() {
      NodeP e = parse_expr();
      skip_space();
      if (pos_ < src_.size())
        fail("unexpected trailing input '" + std::string(1, src_[pos_]) + "'");
      return e;
    }

  private:
    // expr := term (('+'|'-') term)*
    NodeP parse_expr() {
      NodeP lhs = parse_term();
      for (;;) {
        skip_space();
        if (match('+')) lhs = binary(Kind::add, lhs, parse_term());
        else if (match('-')) lhs = binary(Kind::sub, lhs, parse_term());
        else return lhs;
      }
    }

    // term := unary (('*'|'/') unary)*
    NodeP parse_term() {
      NodeP lhs = parse_unary();
      for (;;) {
        skip_space();
        if (match('*')) lhs = binary(Kind::mul, lhs, parse_unary());
        else if (match('/')) lhs = binary(Kind::div, lhs, parse_unary());
        else return lhs;
      }
    }

    // unary := '-' unary | power
    NodeP parse_unary() {
      skip_space();
      if (match('-')) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::neg;
        n->a = parse_unary();
        return n;
      }
      return parse_power();
    }

    // power := atom ('^' unary)?   (right-associative, binds above unary minus)
    NodeP parse_power() {
      NodeP base = parse_atom();
      skip_space();
      if (match('^')) return binary(Kind::pow, base, parse_unary());
      return base;
    }

    NodeP parse_atom() {
      skip_space();
      if (pos_ >= src_.size()) fail("unexpected end of expression");
      char c = src_[pos_];
      if (c == '(') {
        advance();
        NodeP e = parse_expr();
        skip_space();
        if (!match(')')) fail("expected ')'");
        return e;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
      fail(std::string("unexpected character '") + c + "'");
      return nullptr;
    }

    NodeP parse_number() {
      const int sl = line_, sc = col_;
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      if (pos_ < src_.size() && src_[pos_] == '.') {
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t mark = pos_;
        int ml = line_, mc = col_;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        } else {
          pos_ = mark;  // 'e' belongs to an identifier or is stray
          line_ = ml;
          col_ = mc;
        }
      }
      std::string text = src_.substr(start, pos_ - start);
      try {
        if (text == ".") throw std::invalid_argument("dot");
        return num(std::stod(text));
      } catch (const std::exception&) {
        throw parse_error("malformed number '" + text + "'", sl, sc);
      }
    }

    NodeP parse_ident() {
      const int sl = line_, sc = col_;
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      std::string name = src_.substr(start, pos_ - start);
      static const std::pair<const char*, Fun> funs[] = {
          {"sin", Fun::sin}, {"cos", Fun::cos}, {"exp", Fun::exp}, {"tanh", Fun::tanh}};
      for (const auto& [fname, f] : funs) {
        if (name == fname) {
          skip_space();
          if (!match('(')) fail("function '" + name + "' requires parentheses");
          NodeP arg = parse_expr();
          skip_space();
          if (!match(')')) fail("expected ')' after argument of '" + name + "'");
          return fun_node(f, arg);
        }
      }
      for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return variable(static_cast<int>(i));
      throw parse_error("unknown identifier '" + name + "'", sl, sc);
    }

    void skip_space() {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance();
    }

    bool match(char c) {
      if (pos_ < src_.size() && src_[pos_] == c) {
        advance();
        return true;
      }
      return false;
    }

    void advance() {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
      throw parse_error(msg, line_, col_);
    }

    const std::string& src_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
  };

  NodeP root_;
  std::vector<std::string> vars_;
};

/// Conventional coordinate names: x, then y (n = 2) or y1..y_{n-1}.
inline std::vector<std::string> coordinate_names(int n) {
  if (n < 1) throw invalid_argument("coordinate_names: need at least one dimension");
  std::vector<std::string> names{"x"};
  if (n == 2) {
    names.push_back("y");
  } else {
    for (int i = 1; i < n; ++i) names.push_back("y" + std::to_string(i));
  }
  return names;
}

}  // namespace holab

#endif
