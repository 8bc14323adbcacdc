#pragma once

// Truncated power series.  Series<T> carries coefficients of any ring-like T
// (double, or Series<double> for bivariate jets); Jet<K> is a fixed-order
// double series used on hot evaluation paths.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace billiards {

inline double zero_like(double) { return 0.0; }
inline double one_like(double) { return 1.0; }
inline double recip(double x) { return 1.0 / x; }

template <class T>
struct Series;

template <class T>
Series<T> zero_like(const Series<T>& a);
template <class T>
Series<T> one_like(const Series<T>& a);
template <class T>
Series<T> recip(const Series<T>& a);

template <class T>
struct Series {
  std::vector<T> c;

  Series() = default;
  explicit Series(std::vector<T> v) : c(std::move(v)) {}
  Series(int order, const T& fill) : c(static_cast<std::size_t>(order + 1), fill) {}

  int order() const { return static_cast<int>(c.size()) - 1; }
  T& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const T& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  static Series constant(const T& a, int order) {
    Series r(order, zero_like(a));
    r[0] = a;
    return r;
  }
  /// a0 + x
  static Series variable(const T& a0, int order) {
    Series r(order, zero_like(a0));
    r[0] = a0;
    if (order >= 1) r[1] = one_like(a0);
    return r;
  }
  Series truncated(int order) const {
    Series r(order, zero_like(c[0]));
    for (int i = 0; i <= std::min(order, this->order()); ++i) r[i] = c[i];
    return r;
  }
};

template <class T>
Series<T> zero_like(const Series<T>& a) {
  return Series<T>(a.order(), zero_like(a[0]));
}
template <class T>
Series<T> one_like(const Series<T>& a) {
  Series<T> r = zero_like(a);
  r[0] = one_like(a[0]);
  return r;
}

template <class T>
Series<T> operator+(const Series<T>& a, const Series<T>& b) {
  int n = std::min(a.order(), b.order());
  Series<T> r(n, zero_like(a[0]));
  for (int i = 0; i <= n; ++i) r[i] = a[i] + b[i];
  return r;
}
template <class T>
Series<T> operator-(const Series<T>& a, const Series<T>& b) {
  int n = std::min(a.order(), b.order());
  Series<T> r(n, zero_like(a[0]));
  for (int i = 0; i <= n; ++i) r[i] = a[i] - b[i];
  return r;
}
template <class T>
Series<T> operator-(const Series<T>& a) {
  Series<T> r = a;
  for (auto& x : r.c) x = zero_like(x) - x;
  return r;
}
template <class T>
Series<T> operator*(const Series<T>& a, const Series<T>& b) {
  int n = std::min(a.order(), b.order());
  Series<T> r(n, zero_like(a[0]));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n - i; ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}
template <class T>
Series<T> operator*(const Series<T>& a, double s) {
  Series<T> r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}
template <class T>
Series<T> operator*(double s, const Series<T>& a) {
  return a * s;
}
template <class T>
Series<T> scale(const Series<T>& a, const T& s) {
  Series<T> r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}
template <class T>
Series<T> operator+(const Series<T>& a, double s) {
  Series<T> r = a;
  r[0] = r[0] + s * one_like(r[0]);
  return r;
}
template <class T>
Series<T> operator-(const Series<T>& a, double s) {
  return a + (-s);
}

/// Multiplicative inverse; requires an invertible constant term.
template <class T>
Series<T> recip(const Series<T>& a) {
  int n = a.order();
  Series<T> r(n, zero_like(a[0]));
  T r0 = recip(a[0]);
  r[0] = r0;
  for (int k = 1; k <= n; ++k) {
    T acc = zero_like(a[0]);
    for (int j = 1; j <= k; ++j) acc = acc + a[j] * r[k - j];
    r[k] = (zero_like(acc) - acc) * r0;
  }
  return r;
}
template <class T>
Series<T> operator/(const Series<T>& a, const Series<T>& b) {
  return a * recip(b);
}

/// d/dx, result keeps the order of the input (top coefficient zero).
template <class T>
Series<T> derivative(const Series<T>& a) {
  Series<T> r = zero_like(a);
  for (int i = 1; i <= a.order(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
  return r;
}
/// Antiderivative vanishing at 0, truncated to the input order.
template <class T>
Series<T> integral(const Series<T>& a) {
  Series<T> r = zero_like(a);
  for (int i = 1; i <= a.order(); ++i) r[i] = a[i - 1] * (1.0 / i);
  return r;
}
/// (a - a0)/x, order drops by one.
template <class T>
Series<T> shift_down(const Series<T>& a) {
  Series<T> r(a.order() - 1, zero_like(a[0]));
  for (int i = 1; i <= a.order(); ++i) r[i - 1] = a[i];
  return r;
}

/// f(g) for g with zero constant term, Horner scheme.
template <class T>
Series<T> compose(const Series<T>& f, const Series<T>& g) {
  int n = g.order();
  Series<T> r = Series<T>::constant(f[f.order()], n);
  Series<T> g0 = g;
  g0[0] = zero_like(g[0]);
  for (int i = f.order() - 1; i >= 0; --i) {
    r = r * g0;
    r[0] = r[0] + f[i];
  }
  return r;
}

/// Power series sum_k a[k] u^k with double coefficients, u with zero constant term.
template <class T>
Series<T> apply_coefficients(const std::vector<double>& a, const Series<T>& u) {
  int n = u.order();
  Series<T> u0 = u;
  u0[0] = zero_like(u[0]);
  Series<T> r = Series<T>::constant(one_like(u[0]) * a.back(), n);
  for (int i = static_cast<int>(a.size()) - 2; i >= 0; --i) {
    r = r * u0;
    r[0] = r[0] + one_like(u[0]) * a[static_cast<std::size_t>(i)];
  }
  return r;
}

/// Compositional inverse of f with f[0] = 0 and invertible f[1].
template <class T>
Series<T> revert(const Series<T>& f) {
  int n = f.order();
  T a1inv = recip(f[1]);
  Series<T> x = Series<T>::variable(zero_like(f[0]), n);
  Series<T> g = scale(x, a1inv);
  Series<T> nonlin = f;
  nonlin[0] = zero_like(f[0]);
  nonlin[1] = zero_like(f[0]);
  for (int it = 1; it < n; ++it) g = scale(x - compose(nonlin, g), a1inv);
  return g;
}

/// Sum of coefficients times powers of a scalar argument.
template <class T>
T evaluate(const Series<T>& a, double x) {
  T r = a[a.order()];
  for (int i = a.order() - 1; i >= 0; --i) r = r * x + a[i];
  return r;
}

// Elementary functions of double-valued series (generic over Series<double> and Jet<K>).

template <class S>
S make_like(const S& a) {
  S r = a;
  for (int i = 0; i <= a.order(); ++i) r[i] = 0.0;
  return r;
}

template <class S>
S series_exp(const S& a) {
  S r = make_like(a);
  r[0] = std::exp(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * a[k] * r[n - k];
    r[n] = acc / n;
  }
  return r;
}
template <class S>
S series_recip(const S& a) {
  S r = make_like(a);
  r[0] = 1.0 / a[0];
  for (int n = 1; n <= a.order(); ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += a[k] * r[n - k];
    r[n] = -acc * r[0];
  }
  return r;
}
template <class S>
S series_mul(const S& a, const S& b) {
  S r = make_like(a);
  for (int i = 0; i <= a.order(); ++i)
    for (int j = 0; j <= a.order() - i; ++j) r[i + j] += a[i] * b[j];
  return r;
}
/// Antiderivative of a'/b style integrands: returns c0 + integral of d.
template <class S>
S series_integrate(const S& d, double c0) {
  S r = make_like(d);
  r[0] = c0;
  for (int i = 1; i <= d.order(); ++i) r[i] = d[i - 1] / i;
  return r;
}
template <class S>
S series_deriv(const S& a) {
  S r = make_like(a);
  for (int i = 1; i <= a.order(); ++i) r[i - 1] = i * a[i];
  return r;
}
template <class S>
S series_log(const S& a) {
  if (!(a[0] > 0.0)) throw std::domain_error("log of non-positive series");
  return series_integrate(series_mul(series_deriv(a), series_recip(a)), std::log(a[0]));
}
template <class S>
S series_sqrt(const S& a) {
  S r = make_like(a);
  if (!(a[0] > 0.0)) throw std::domain_error("sqrt of non-positive series");
  r[0] = std::sqrt(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    double acc = a[n];
    for (int k = 1; k < n; ++k) acc -= r[k] * r[n - k];
    r[n] = acc / (2.0 * r[0]);
  }
  return r;
}
template <class S>
S series_pow(const S& a, double p) {
  double ip = std::round(p);
  if (ip == p && std::fabs(ip) <= 64) {
    int e = static_cast<int>(std::fabs(ip));
    S r = make_like(a);
    r[0] = 1.0;
    S base = a;
    while (e > 0) {
      if (e & 1) r = series_mul(r, base);
      base = series_mul(base, base);
      e >>= 1;
    }
    return ip < 0 ? series_recip(r) : r;
  }
  if (!(a[0] > 0.0)) throw std::domain_error("fractional power of non-positive series");
  S l = series_log(a);
  for (int i = 0; i <= l.order(); ++i) l[i] *= p;
  return series_exp(l);
}
template <class S>
void series_sincos(const S& a, S& s, S& c) {
  s = make_like(a);
  c = make_like(a);
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    double as = 0.0, ac = 0.0;
    for (int k = 1; k <= n; ++k) {
      as += k * a[k] * c[n - k];
      ac -= k * a[k] * s[n - k];
    }
    s[n] = as / n;
    c[n] = ac / n;
  }
}
template <class S>
void series_sinhcosh(const S& a, S& s, S& c) {
  s = make_like(a);
  c = make_like(a);
  s[0] = std::sinh(a[0]);
  c[0] = std::cosh(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    double as = 0.0, ac = 0.0;
    for (int k = 1; k <= n; ++k) {
      as += k * a[k] * c[n - k];
      ac += k * a[k] * s[n - k];
    }
    s[n] = as / n;
    c[n] = ac / n;
  }
}
template <class S>
S series_atan(const S& a) {
  S one_plus = series_mul(a, a);
  one_plus[0] += 1.0;
  return series_integrate(series_mul(series_deriv(a), series_recip(one_plus)), std::atan(a[0]));
}
template <class S>
S series_asin(const S& a) {
  S q = series_mul(a, a);
  for (int i = 0; i <= q.order(); ++i) q[i] = -q[i];
  q[0] += 1.0;
  return series_integrate(series_mul(series_deriv(a), series_recip(series_sqrt(q))), std::asin(a[0]));
}

/// Fixed-order double series.
template <int K>
struct Jet {
  std::array<double, K + 1> c{};
  static constexpr int order() { return K; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  static Jet constant(double v) {
    Jet r;
    r[0] = v;
    return r;
  }
  static Jet variable(double v) {
    Jet r;
    r[0] = v;
    if (K >= 1) r[1] = 1.0;
    return r;
  }
};

template <int K>
Jet<K> operator+(const Jet<K>& a, const Jet<K>& b) {
  Jet<K> r;
  for (int i = 0; i <= K; ++i) r[i] = a[i] + b[i];
  return r;
}
template <int K>
Jet<K> operator-(const Jet<K>& a, const Jet<K>& b) {
  Jet<K> r;
  for (int i = 0; i <= K; ++i) r[i] = a[i] - b[i];
  return r;
}
template <int K>
Jet<K> operator-(const Jet<K>& a) {
  Jet<K> r;
  for (int i = 0; i <= K; ++i) r[i] = -a[i];
  return r;
}
template <int K>
Jet<K> operator*(const Jet<K>& a, const Jet<K>& b) {
  return series_mul(a, b);
}
template <int K>
Jet<K> operator/(const Jet<K>& a, const Jet<K>& b) {
  return series_mul(a, series_recip(b));
}
template <int K>
Jet<K> operator*(const Jet<K>& a, double s) {
  Jet<K> r = a;
  for (int i = 0; i <= K; ++i) r[i] *= s;
  return r;
}
template <int K>
Jet<K> operator+(const Jet<K>& a, double s) {
  Jet<K> r = a;
  r[0] += s;
  return r;
}

using DSeries = Series<double>;
using BSeries = Series<DSeries>;

/// Maclaurin coefficients of standard functions up to the given order.
std::vector<double> maclaurin_sin(int order);
std::vector<double> maclaurin_cos(int order);
std::vector<double> maclaurin_asin(int order);
std::vector<double> maclaurin_atan(int order);

/// Re-expansion p(d + x) of a univariate series p(u) into a bivariate series:
/// outer variable x of order `outer`, coefficients are series in d of order `inner`.
BSeries shift_expand(const DSeries& p, int outer, int inner);

}  // namespace billiards
