#pragma once

// Small arithmetic expression language in one variable `x`, used for graph curves.
// Grammar: + - * / ^, unary minus, parentheses, constants pi and e,
// functions sqrt exp log sin cos tan sinh cosh atan.

#include <cmath>
#include <string>
#include <vector>

#include "billiards/series.hpp"

namespace billiards {

class Expr {
 public:
  static Expr parse(const std::string& text);

  const std::string& text() const { return text_; }
  double operator()(double x) const { return eval_double(root_, x); }

  /// Evaluation over series types (DSeries or Jet<K>) in the variable x.
  template <class S>
  S eval(const S& x) const {
    return eval_series(root_, x);
  }

  /// True if the expression is c*x^r (or x^r); fills c and r.
  bool as_power_law(double& coeff, double& exponent) const;

 private:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Func };
  enum class Fn { Sqrt, Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Atan };
  struct Node {
    Kind kind;
    double value = 0.0;
    Fn fn = Fn::Sqrt;
    int a = -1, b = -1;
  };
  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;

  friend class ExprParser;

  bool is_constant(int n) const;
  double const_value(int n) const;
  double eval_double(int n, double x) const;

  template <class S>
  static S lift(const S& like, double v) {
    S r = make_like(like);
    r[0] = v;
    return r;
  }

  template <class S>
  static S apply_fn(Fn f, const S& a) {
    S s, c;
    switch (f) {
      case Fn::Sqrt: return series_sqrt(a);
      case Fn::Exp: return series_exp(a);
      case Fn::Log: return series_log(a);
      case Fn::Sin: series_sincos(a, s, c); return s;
      case Fn::Cos: series_sincos(a, s, c); return c;
      case Fn::Tan: series_sincos(a, s, c); return series_mul(s, series_recip(c));
      case Fn::Sinh: series_sinhcosh(a, s, c); return s;
      case Fn::Cosh: series_sinhcosh(a, s, c); return c;
      case Fn::Atan: return series_atan(a);
    }
    return a;
  }

  template <class S>
  S eval_series(int n, const S& x) const {
    const Node& nd = nodes_[static_cast<std::size_t>(n)];
    switch (nd.kind) {
      case Kind::Const: return lift(x, nd.value);
      case Kind::Var: return x;
      case Kind::Add: {
        S l = eval_series(nd.a, x), r = eval_series(nd.b, x), o = make_like(x);
        for (int i = 0; i <= o.order(); ++i) o[i] = l[i] + r[i];
        return o;
      }
      case Kind::Sub: {
        S l = eval_series(nd.a, x), r = eval_series(nd.b, x), o = make_like(x);
        for (int i = 0; i <= o.order(); ++i) o[i] = l[i] - r[i];
        return o;
      }
      case Kind::Mul: {
        if (is_constant(nd.a)) {
          S r = eval_series(nd.b, x);
          double c = const_value(nd.a);
          for (int i = 0; i <= r.order(); ++i) r[i] *= c;
          return r;
        }
        return series_mul(eval_series(nd.a, x), eval_series(nd.b, x));
      }
      case Kind::Div:
        return series_mul(eval_series(nd.a, x), series_recip(eval_series(nd.b, x)));
      case Kind::Neg: {
        S r = eval_series(nd.a, x);
        for (int i = 0; i <= r.order(); ++i) r[i] = -r[i];
        return r;
      }
      case Kind::Pow: {
        S base = eval_series(nd.a, x);
        if (is_constant(nd.b)) return series_pow(base, const_value(nd.b));
        S l = series_log(base), e = eval_series(nd.b, x);
        return series_exp(series_mul(e, l));
      }
      case Kind::Func: return apply_fn(nd.fn, eval_series(nd.a, x));
    }
    return x;
  }
};

}  // namespace billiards
