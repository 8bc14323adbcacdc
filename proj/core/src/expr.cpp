#include "billiards/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

class ExprParser {
 public:
  ExprParser(Expr& e, const std::string& t) : e_(e), t_(t) {}

  int parse_all() {
    int n = parse_sum();
    skip();
    if (pos_ != t_.size()) error("unexpected '" + std::string(1, t_[pos_]) + "'");
    return n;
  }

 private:
  Expr& e_;
  const std::string& t_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::Validation, "expression '" + t_ + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < t_.size() && t_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int add(Expr::Kind k, int a = -1, int b = -1, double v = 0.0) {
    Expr::Node n;
    n.kind = k;
    n.a = a;
    n.b = b;
    n.value = v;
    e_.nodes_.push_back(n);
    return static_cast<int>(e_.nodes_.size()) - 1;
  }
  int parse_sum() {
    int l = parse_product();
    for (;;) {
      if (eat('+')) l = add(Expr::Kind::Add, l, parse_product());
      else if (eat('-')) l = add(Expr::Kind::Sub, l, parse_product());
      else return l;
    }
  }
  int parse_product() {
    int l = parse_unary();
    for (;;) {
      if (eat('*')) l = add(Expr::Kind::Mul, l, parse_unary());
      else if (eat('/')) l = add(Expr::Kind::Div, l, parse_unary());
      else return l;
    }
  }
  int parse_unary() {
    if (eat('-')) return add(Expr::Kind::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }
  int parse_power() {
    int base = parse_primary();
    if (eat('^')) return add(Expr::Kind::Pow, base, parse_unary());
    return base;
  }
  int parse_primary() {
    skip();
    if (pos_ >= t_.size()) error("unexpected end");
    char c = t_[pos_];
    if (c == '(') {
      ++pos_;
      int n = parse_sum();
      if (!eat(')')) error("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = t_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      pos_ += static_cast<std::size_t>(end - begin);
      return add(Expr::Kind::Const, -1, -1, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < t_.size() && std::isalnum(static_cast<unsigned char>(t_[pos_]))) ++pos_;
      std::string id = t_.substr(start, pos_ - start);
      if (id == "x") return add(Expr::Kind::Var);
      if (id == "pi") return add(Expr::Kind::Const, -1, -1, std::numbers::pi);
      if (id == "e") return add(Expr::Kind::Const, -1, -1, std::numbers::e);
      static const std::pair<const char*, Expr::Fn> fns[] = {
          {"sqrt", Expr::Fn::Sqrt}, {"exp", Expr::Fn::Exp},   {"log", Expr::Fn::Log},
          {"sin", Expr::Fn::Sin},   {"cos", Expr::Fn::Cos},   {"tan", Expr::Fn::Tan},
          {"sinh", Expr::Fn::Sinh}, {"cosh", Expr::Fn::Cosh}, {"atan", Expr::Fn::Atan}};
      for (const auto& [name, fn] : fns) {
        if (id == name) {
          if (!eat('(')) error("expected '(' after " + id);
          int arg = parse_sum();
          if (!eat(')')) error("missing ')'");
          int n = add(Expr::Kind::Func, arg);
          e_.nodes_[static_cast<std::size_t>(n)].fn = fn;
          return n;
        }
      }
      error("unknown identifier '" + id + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }
};

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.text_ = text;
  ExprParser p(e, e.text_);
  e.root_ = p.parse_all();
  return e;
}

bool Expr::is_constant(int n) const {
  const Node& nd = nodes_[static_cast<std::size_t>(n)];
  switch (nd.kind) {
    case Kind::Const: return true;
    case Kind::Var: return false;
    case Kind::Neg:
    case Kind::Func: return is_constant(nd.a);
    default: return is_constant(nd.a) && is_constant(nd.b);
  }
}

double Expr::const_value(int n) const { return eval_double(n, 0.0); }

double Expr::eval_double(int n, double x) const {
  const Node& nd = nodes_[static_cast<std::size_t>(n)];
  switch (nd.kind) {
    case Kind::Const: return nd.value;
    case Kind::Var: return x;
    case Kind::Add: return eval_double(nd.a, x) + eval_double(nd.b, x);
    case Kind::Sub: return eval_double(nd.a, x) - eval_double(nd.b, x);
    case Kind::Mul: return eval_double(nd.a, x) * eval_double(nd.b, x);
    case Kind::Div: return eval_double(nd.a, x) / eval_double(nd.b, x);
    case Kind::Neg: return -eval_double(nd.a, x);
    case Kind::Pow: return std::pow(eval_double(nd.a, x), eval_double(nd.b, x));
    case Kind::Func: {
      double a = eval_double(nd.a, x);
      switch (nd.fn) {
        case Fn::Sqrt: return std::sqrt(a);
        case Fn::Exp: return std::exp(a);
        case Fn::Log: return std::log(a);
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        case Fn::Tan: return std::tan(a);
        case Fn::Sinh: return std::sinh(a);
        case Fn::Cosh: return std::cosh(a);
        case Fn::Atan: return std::atan(a);
      }
    }
  }
  return 0.0;
}

bool Expr::as_power_law(double& coeff, double& exponent) const {
  const Node& r = nodes_[static_cast<std::size_t>(root_)];
  auto is_xpow = [&](int n, double& ex) {
    const Node& nd = nodes_[static_cast<std::size_t>(n)];
    if (nd.kind == Kind::Var) {
      ex = 1.0;
      return true;
    }
    if (nd.kind == Kind::Pow && nodes_[static_cast<std::size_t>(nd.a)].kind == Kind::Var &&
        is_constant(nd.b)) {
      ex = const_value(nd.b);
      return true;
    }
    return false;
  };
  if (is_xpow(root_, exponent)) {
    coeff = 1.0;
    return true;
  }
  if (r.kind == Kind::Mul && is_constant(r.a) && is_xpow(r.b, exponent)) {
    coeff = const_value(r.a);
    return true;
  }
  return false;
}

}  // namespace billiards
