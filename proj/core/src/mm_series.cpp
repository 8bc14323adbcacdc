#include "billiards/mm_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/fit.hpp"

namespace billiards {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

BSeries constant_inner(const DSeries& outer, int inner) {
  BSeries r(outer.order(), DSeries(inner, 0.0));
  for (int k = 0; k <= outer.order(); ++k) r[k][0] = outer[k];
  return r;
}

// p(delta + x) composed with x = sigma(delta, z).
BSeries compose_shifted(const DSeries& p, const BSeries& sigma) {
  int inner = sigma[0].order();
  BSeries e = shift_expand(p, sigma.order(), inner);
  return compose(e, sigma);
}

double eval_poly(const DSeries& a, int upto, double d, int deriv) {
  double r = 0.0;
  for (int m = upto; m >= deriv; --m) {
    double c = a[m];
    for (int j = 0; j < deriv; ++j) c *= (m - j);
    r = r * d + c;
  }
  return r;
}

// Solve the small dense system A x = b (partial pivoting).
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= A[i][k] * x[k];
    x[i] = acc / A[i][i];
  }
  return x;
}

}  // namespace

LocalLift local_lift(const ConvexCurve& curve, double s_i, int z_order, int delta_order) {
  const int Mz = z_order, Mi = delta_order;
  const int Mv = Mz + 2;
  const int Mc = Mi + Mv + 2;
  DSeries x, y, K;
  curve.arc_taylor(s_i, Mc, x, y, K);
  DSeries A = integral(K);

  // Turning angle between s and s + v as a series in v with delta-series coefficients.
  BSeries turn = shift_expand(A, Mv, Mi);
  turn[0] = DSeries(Mi, 0.0);
  BSeries cosT = apply_coefficients(maclaurin_cos(Mv), turn);
  BSeries sinT = apply_coefficients(maclaurin_sin(Mv), turn);
  BSeries cpar = integral(cosT), cperp = integral(sinT);
  BSeries ratio = shift_down(cperp) / shift_down(cpar);
  BSeries theta = apply_coefficients(maclaurin_atan(ratio.order()), ratio).truncated(Mz);
  theta[0] = DSeries(Mi, 0.0);

  // phi(z) = 2 asin(z / sqrt 2)
  std::vector<double> as = maclaurin_asin(Mz);
  DSeries phiz(Mz, 0.0);
  double p = 1.0;
  for (int k = 0; k <= Mz; ++k) {
    phiz[k] = 2.0 * as[static_cast<std::size_t>(k)] * p;
    p /= kSqrt2;
  }
  BSeries phiB = constant_inner(phiz, Mi);
  BSeries sigma = compose(revert(theta), phiB);
  BSeries turn_at = compose(turn.truncated(Mz), sigma);
  BSeries phi_out = turn_at - phiB;
  BSeries Z = apply_coefficients(maclaurin_sin(Mz), phi_out * 0.5) * kSqrt2;
  sigma[0] = DSeries(Mi, 0.0);
  Z[0] = DSeries(Mi, 0.0);
  return {s_i, sigma, Z, K.truncated(Mi)};
}

JetTable compute_jets(const ConvexCurve& curve, const std::vector<double>& grid, int order) {
  if (order > 2 * kMaxSeriesOrder + 2) fail(ErrorCode::OrderTooHigh, "jet order above the supported bound");
  JetTable J;
  J.s = grid;
  J.order = order;
  for (double s : grid) {
    LocalLift L = local_lift(curve, s, order, 2);
    std::vector<double> f1(static_cast<std::size_t>(order + 1)), f2(f1.size()), b1(f1.size()), b2(f1.size());
    for (int k = 0; k <= order; ++k) {
      f1[static_cast<std::size_t>(k)] = L.sigma[k][0];
      f2[static_cast<std::size_t>(k)] = L.Z[k][0];
    }
    f1[0] = s;
    b1 = f1;
    for (int k = 0; k <= order; ++k) b2[static_cast<std::size_t>(k)] = -f2[static_cast<std::size_t>(k)];
    J.F1.push_back(f1);
    J.F2.push_back(f2);
    J.B1.push_back(b1);
    J.B2.push_back(b2);
    J.condition.push_back(0.0);
  }
  return J;
}

JetTable compute_jets_fd(const BilliardMap& map, const std::vector<double>& grid, int order, double tol) {
  if (order > 8) fail(ErrorCode::OrderTooHigh, "finite-difference jets are limited to order 8");
  const int M = order / 2 + 2;
  const int npts = 2 * M + 1;
  auto lifted = [&](double s, double z, double& s2, double& z2) {
    double phi = 2.0 * std::asin(z / kSqrt2);
    PhasePoint b = map.involution_beta({Chart::SPhi, s, phi});
    s2 = b.c1;
    z2 = kSqrt2 * std::sin(-0.5 * b.c2);
  };
  auto fit = [&](double s, double hz, std::vector<double>& c1, std::vector<double>& c2) {
    std::vector<std::vector<double>> V(static_cast<std::size_t>(npts), std::vector<double>(static_cast<std::size_t>(npts)));
    std::vector<double> r1(static_cast<std::size_t>(npts)), r2(static_cast<std::size_t>(npts));
    for (int j = -M; j <= M; ++j) {
      std::size_t row = static_cast<std::size_t>(j + M);
      double tj = j;
      double pw = 1.0;
      for (int k = 0; k < npts; ++k) {
        V[row][static_cast<std::size_t>(k)] = pw;
        pw *= tj;
      }
      if (j == 0) {
        r1[row] = 0.0;
        r2[row] = 0.0;
      } else {
        double s2, z2;
        lifted(s, j * hz, s2, z2);
        r1[row] = s2 - s;
        r2[row] = z2;
      }
    }
    c1 = solve_dense(V, r1);
    c2 = solve_dense(V, r2);
    double sc = 1.0;
    for (int k = 0; k < npts; ++k) {
      c1[static_cast<std::size_t>(k)] /= sc;
      c2[static_cast<std::size_t>(k)] /= sc;
      sc *= hz;
    }
  };
  JetTable J;
  J.s = grid;
  J.order = order;
  const ConvexCurve& curve = map.curve();
  for (double s : grid) {
    double hz = 0.02 * std::min(1.0, std::sqrt(curve.curvature(s) > 0 ? 1.0 / curve.curvature(s) : 1.0));
    std::vector<double> a1, a2, b1, b2;
    fit(s, hz, a1, a2);
    fit(s, 0.5 * hz, b1, b2);
    std::vector<double> f1(static_cast<std::size_t>(order + 1)), f2(f1.size());
    double cond = 0.0;
    for (int k = 0; k <= order; ++k) {
      std::size_t i = static_cast<std::size_t>(k);
      // symmetric nodes: the first neglected power with the parity of k
      double p = std::pow(2.0, (k % 2 ? npts : npts + 1) - k);
      double e1 = (b1[i] - a1[i]) / (p - 1.0), e2 = (b2[i] - a2[i]) / (p - 1.0);
      f1[i] = b1[i] + e1;
      f2[i] = b2[i] + e2;
      if (k >= 1) cond = std::max(cond, std::max(std::fabs(e1), std::fabs(e2)) / std::max(std::fabs(f1[1]), 1.0));
    }
    f1[0] = s;
    f2[0] = 0.0;
    if (cond > tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "jet extrapolation disagreement %.3e at s=%.6g", cond, s);
      fail(ErrorCode::IllConditioned, buf);
    }
    std::vector<double> g2(f2.size());
    for (std::size_t i = 0; i < f2.size(); ++i) g2[i] = -f2[i];
    J.F1.push_back(f1);
    J.F2.push_back(f2);
    J.B1.push_back(f1);
    J.B2.push_back(g2);
    J.condition.push_back(cond);
  }
  return J;
}

std::vector<double> stencil_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 7) fail(ErrorCode::DegenerateSpec, "need at least 7 grid points");
  // Derivative of the degree-6 interpolant through nodes a..a+6, at node a + x0.
  auto one_sided = [&](std::size_t a, double x0) {
    double acc = 0.0;
    for (int j = 0; j < 7; ++j) {
      double w = 0.0;
      for (int m = 0; m < 7; ++m) {
        if (m == j) continue;
        double prod = 1.0;
        for (int l = 0; l < 7; ++l)
          if (l != j && l != m) prod *= (x0 - l) / (j - l);
        w += prod / (j - m);
      }
      acc += w * f[a + static_cast<std::size_t>(j)];
    }
    return acc / h;
  };
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n)
      d[i] = (-f[i - 3] + 9 * f[i - 2] - 45 * f[i - 1] + 45 * f[i + 1] - 9 * f[i + 2] + f[i + 3]) / (60 * h);
    else if (i < 3)
      d[i] = one_sided(0, static_cast<double>(i));
    else
      d[i] = one_sided(n - 7, static_cast<double>(i - (n - 7)));
  }
  return d;
}

OdeSolution solve_coefficient_ode(int k, const std::vector<double>& s, const std::vector<double>& w,
                                  const std::vector<double>& b, double C) {
  const std::size_t n = s.size();
  if (n < 7 || w.size() != n || b.size() != n) fail(ErrorCode::DegenerateSpec, "grid arrays must match, n >= 7");
  const double h = s[1] - s[0];
  const double e = 2.0 * k / 3.0;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = b[i] * std::pow(w[i], -e - 1.0);
  // Cumulative integral with 4-point (cubic) panels.
  std::vector<double> I(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double inc;
    if (i == 0)
      inc = (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]) * h / 24;
    else if (i + 2 >= n)
      inc = (9 * f[i + 1] + 19 * f[i] - 5 * f[i - 1] + f[i - 2]) * h / 24;
    else
      inc = (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]) * h / 24;
    if (!std::isfinite(inc)) fail(ErrorCode::QuadratureFailure, "non-finite integrand");
    I[i + 1] = I[i] + inc;
  }
  OdeSolution out;
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = std::pow(w[i], e) * (C - I[i]);
  std::vector<double> gp = stencil_derivative(out.g, h), wp = stencil_derivative(w, h);
  for (std::size_t i = 0; i < n; ++i) out.max_b = std::max(out.max_b, std::fabs(b[i]));
  for (std::size_t i = 3; i + 3 < n; ++i)
    out.max_residual = std::max(out.max_residual, std::fabs(gp[i] * w[i] - e * wp[i] * out.g[i] + b[i]));
  return out;
}

std::size_t InvariantSeries::cell(double s) const {
  if (!covers(s)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "s=%.6g outside series grid [%.6g, %.6g]", s, s_begin(), s_end());
    fail(ErrorCode::OutsideValidity, buf);
  }
  double r = std::round((s - grid_.front()) / spacing_);
  long i = std::clamp(static_cast<long>(r), 0L, static_cast<long>(grid_.size()) - 1);
  return static_cast<std::size_t>(i);
}

double InvariantSeries::eval(const std::vector<std::vector<DSeries>>& tab, int k, double s, int deriv) const {
  if (k < 1 || k > order_) fail(ErrorCode::OrderMismatch, "coefficient index outside series order");
  std::size_t i = cell(s);
  const DSeries& a = tab[i][static_cast<std::size_t>(k - 1)];
  return eval_poly(a, a.order(), s - grid_[i], deriv);
}

double InvariantSeries::g(int k, double s, int deriv) const { return eval(g_, k, s, deriv); }
double InvariantSeries::t(int k, double s, int deriv) const { return eval(t_, k, s, deriv); }
double InvariantSeries::h(int k, double s, int deriv) const {
  if (!renormalized_) fail(ErrorCode::OrderMismatch, "series was built without renormalization");
  return eval(h_, k, s, deriv);
}
double InvariantSeries::w(double s) const {
  std::size_t i = cell(s);
  return eval_poly(w_[i], w_[i].order(), s - grid_[i], 0);
}

namespace {
double sum_series(const InvariantSeries& S, double (InvariantSeries::*coef)(int, double, int) const, double s,
                  double y, int n, int sderiv, int yderiv) {
  if (n > S.order()) fail(ErrorCode::OrderMismatch, "requested order above the built series");
  double acc = 0.0;
  for (int k = n; k >= 1; --k) {
    double c = (S.*coef)(k, s, sderiv);
    if (yderiv == 1) c *= k;
    acc = acc * y + c;
  }
  return yderiv == 1 ? acc : acc * y;
}
}  // namespace

double InvariantSeries::g_value(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::g, s, y, n, 0, 0); }
double InvariantSeries::t_value(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::t, s, y, n, 0, 0); }
double InvariantSeries::h_value(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::h, s, y, n, 0, 0); }
double InvariantSeries::h_dy(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::h, s, y, n, 0, 1); }
double InvariantSeries::h_ds(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::h, s, y, n, 1, 0); }
double InvariantSeries::t_dy(double s, double y, int n) const { return sum_series(*this, &InvariantSeries::t, s, y, n, 0, 1); }

std::vector<double> InvariantSeries::t_z_coefficients(double s) const {
  std::vector<double> c(static_cast<std::size_t>(2 * order_ + 1), 0.0);
  for (int k = 1; k <= order_; ++k) c[static_cast<std::size_t>(2 * k)] = t(k, s);
  return c;
}

std::string InvariantSeries::csv() const {
  std::ostringstream os;
  os << "s";
  for (const char* nm : {"g", "t", "h"})
    for (int k = 1; k <= order_; ++k) os << ',' << nm << '_' << k;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15e", grid_[i]);
    os << buf;
    for (const auto* tab : {&g_, &t_, &h_})
      for (int k = 0; k < order_; ++k) {
        double v = (tab == &h_ && !renormalized_) ? 0.0 : (*tab)[i][static_cast<std::size_t>(k)][0];
        std::snprintf(buf, sizeof buf, ",%.15e", v);
        os << buf;
      }
    os << '\n';
  }
  return os.str();
}

double level_advance(const InvariantSeries& ser, const BilliardMap& map, int n, double s, double c) {
  auto solve_y = [&](double u, double y0) {
    double yy = y0;
    for (int it = 0; it < 60; ++it) {
      double f = ser.t_value(u, yy, n) - c;
      double step = f / ser.t_dy(u, yy, n);
      yy -= step;
      if (std::fabs(step) <= 1e-16 * yy) break;
    }
    return yy;
  };
  double y0 = solve_y(s, c / ser.t(1, s));
  double s2, y2;
  map.step_sy(s, y0, s2, y2);
  if (!ser.covers(s2)) fail(ErrorCode::LevelCurveEscape, "level curve leaves the series grid");
  // Hamiltonian time of t along its level curve: d theta = ds / t_y.
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  int m = std::max(1, static_cast<int>(std::ceil(std::fabs(s2 - s) / ser.spacing())));
  double hstep = (s2 - s) / m, acc = 0.0, yy = y0;
  for (int p = 0; p < m; ++p) {
    double a = s + p * hstep;
    for (int j = 0; j < 8; ++j) {
      double u = a + 0.5 * hstep * (gx[j] + 1.0);
      yy = solve_y(u, yy);
      acc += gw[j] * 0.5 * hstep / ser.t_dy(u, yy, n);
    }
  }
  return acc;
}

InvariantSeries build_series(const ConvexCurve& curve, const SeriesOptions& opt) {
  const int N = opt.order;
  if (N > kMaxSeriesOrder) fail(ErrorCode::OrderTooHigh, "series order above 12 is not supported");
  if (N < 1) fail(ErrorCode::Validation, "series order must be at least 1");
  if (opt.eval_order < 4) fail(ErrorCode::Validation, "eval_order must be at least 4");
  const int E = opt.eval_order;
  const int Mi = E + 2 * N - 2;
  const int Mz = 2 * N + 2;

  double sb = opt.s_begin, se = opt.s_end;
  const double L = curve.length();
  if (sb == 0.0 && se == 0.0) {
    sb = 0.0;
    se = curve.closed() ? 1.5 * L : L;
  }
  if (!(se > sb)) fail(ErrorCode::Validation, "empty series window");
  if (!curve.closed() && (sb < 0.0 || se > L + 1e-12)) fail(ErrorCode::OutOfDomain, "series window outside the arc");
  double hs = opt.spacing;
  if (hs <= 0.0) {
    double kmax = 0.0;
    for (int i = 0; i <= 256; ++i) kmax = std::max(kmax, curve.curvature(sb + (se - sb) * i / 256.0));
    hs = std::min((se - sb) / 400.0, 0.02 / kmax);
  }
  const int npts = std::max(8, static_cast<int>(std::ceil((se - sb) / hs)) + 1);
  hs = (se - sb) / (npts - 1);

  InvariantSeries S;
  S.order_ = N;
  S.spacing_ = hs;
  S.grid_.resize(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) S.grid_[static_cast<std::size_t>(i)] = sb + i * hs;

  std::vector<LocalLift> lifts;
  lifts.reserve(static_cast<std::size_t>(npts));
  std::vector<DSeries> Wser(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    lifts.push_back(local_lift(curve, S.grid_[static_cast<std::size_t>(i)], Mz, Mi));
    Wser[static_cast<std::size_t>(i)] = series_recip(lifts.back().kappa) * (2.0 * kSqrt2);
  }
  S.w_ = Wser;

  // Powers Z^{2k} per point.
  std::vector<std::vector<BSeries>> Zp(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    const BSeries& Z = lifts[static_cast<std::size_t>(i)].Z;
    BSeries Z2 = Z * Z, acc = Z2;
    for (int k = 1; k <= N; ++k) {
      Zp[static_cast<std::size_t>(i)].push_back(acc);
      acc = acc * Z2;
    }
  }

  S.g_.assign(static_cast<std::size_t>(npts), {});
  std::vector<BSeries> Gsum(static_cast<std::size_t>(npts), BSeries(Mz, DSeries(Mi, 0.0)));
  auto add_component = [&](int k) {
    for (int i = 0; i < npts; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      BSeries comp = compose_shifted(S.g_[ii][static_cast<std::size_t>(k - 1)], lifts[ii].sigma) * Zp[ii][static_cast<std::size_t>(k - 1)];
      Gsum[ii] = Gsum[ii] + comp;
    }
  };

  for (int i = 0; i < npts; ++i) {
    DSeries g1 = series_pow(Wser[static_cast<std::size_t>(i)], 2.0 / 3.0);
    S.g_[static_cast<std::size_t>(i)].push_back(g1);
  }
  add_component(1);
  double ode_res = 0.0;
  for (int n = 2; n <= N; ++n) {
    const int An = Mi - 2 * (n - 1);
    const double e = 2.0 * n / 3.0;
    std::vector<DSeries> b(static_cast<std::size_t>(npts)), f(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      b[ii] = Gsum[ii][2 * n + 1];
      f[ii] = b[ii] * series_pow(Wser[ii], -e - 1.0);
    }
    // Cumulative integral of b w^{-2n/3-1} from the first grid point, half-cells from each side.
    auto half = [&](const DSeries& a, double x) {
      double acc = 0.0;
      for (int m = An - 1; m >= 0; --m) acc = acc * x + a[m] / (m + 1);
      return acc * x;
    };
    std::vector<double> I(static_cast<std::size_t>(npts), 0.0);
    for (int i = 0; i + 1 < npts; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      I[ii + 1] = I[ii] + half(f[ii], 0.5 * hs) - half(f[ii + 1], -0.5 * hs);
    }
    double Cn = 0.0;
    for (int i = 0; i < npts; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      const DSeries& W = Wser[ii];
      DSeries P = series_deriv(W) * series_recip(W) * e;
      DSeries Q = -(b[ii] * series_recip(W));
      DSeries g(Mi, 0.0);
      g[0] = std::pow(W[0], e) * (Cn - I[ii]);
      for (int m = 0; m < An; ++m) {
        double acc = Q[m];
        for (int j = 0; j <= m; ++j) acc += P[j] * g[m - j];
        g[m + 1] = acc / (m + 1);
      }
      // residual of g' w - (2n/3) w' g + b at delta = 0 (value consistency of the recurrence)
      ode_res = std::max(ode_res, std::fabs(g[1] * W[0] - e * W[1] * g[0] + b[ii][0]));
      S.g_[ii].push_back(g);
    }
    add_component(n);
  }
  S.ode_residual_ = ode_res;

  // t = g + g o beta; g o beta = G o F for even G.
  S.t_.assign(static_cast<std::size_t>(npts), {});
  for (int i = 0; i < npts; ++i) {
    std::size_t ii = static_cast<std::size_t>(i);
    for (int k = 1; k <= N; ++k) {
      int Ak = Mi - 2 * (k - 1);
      DSeries tk = S.g_[ii][static_cast<std::size_t>(k - 1)] + Gsum[ii][2 * k];
      S.t_[ii].push_back(tk.truncated(Ak).truncated(Mi));
    }
  }
  // Odd z-coefficients of T o F - T through degree 2N+1, at the grid points.
  {
    double worst = 0.0;
    for (int i = 0; i < npts; i += std::max(1, npts / 32)) {
      std::size_t ii = static_cast<std::size_t>(i);
      BSeries tf(Mz, DSeries(Mi, 0.0));
      for (int k = 1; k <= N; ++k)
        tf = tf + compose_shifted(S.t_[ii][static_cast<std::size_t>(k - 1)], lifts[ii].sigma) * Zp[ii][static_cast<std::size_t>(k - 1)];
      double sc = std::fabs(S.t_[ii][0][0]);
      for (int m = 1; m <= 2 * N + 1; m += 2) worst = std::max(worst, std::fabs(tf[m][0]) / sc);
    }
    S.symmetry_defect_ = worst;
  }

  if (opt.renormalize) {
    BilliardMap map(curve);
    ProfileFit pf;
    const int nl = std::max(N + 2, opt.profile_levels);
    // Starting footpoints well inside the grid.
    std::vector<double> starts;
    double lo = S.grid_.front() + 0.05 * (se - sb), hi = S.grid_.front() + 0.45 * (se - sb);
    for (int j = 0; j < 4; ++j) starts.push_back(lo + (hi - lo) * j / 3.0);
    double sref = starts[0];
    for (int l = 0; l < nl; ++l) {
      double y = opt.profile_y_min * std::pow(opt.profile_y_max / opt.profile_y_min, l / double(nl - 1));
      double c = S.t_value(sref, y, N);
      double acc = 0.0;
      for (double s0 : starts) acc += level_advance(S, map, N, s0, c);
      pf.levels.push_back(c);
      pf.xi.push_back(acc / starts.size());
    }
    std::vector<double> ratio(pf.levels.size());
    for (std::size_t l = 0; l < ratio.size(); ++l) ratio[l] = pf.xi[l] / std::sqrt(pf.levels[l]);
    // Extra degrees absorb the tail of psi so the leading N coefficients are not biased.
    PolyFit fitres = polyfit(pf.levels, ratio, std::min(std::max(N + 3, 6), nl - 2));
    pf.psi.assign(fitres.coeffs.begin(), fitres.coeffs.begin() + N);
    pf.rms_residual = fitres.rms;
    if (!(pf.psi[0] > 0.0) || pf.rms_residual > 1e-8 * pf.psi[0]) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "drift profile not resolved: psi0=%.3e rms=%.3e", pf.psi[0], pf.rms_residual);
      fail(ErrorCode::ProfileNoise, buf);
    }
    // v(t) = t (sum c_j t^j)^{2/3}, c_j = 3 psi_j / (2j+3)
    DSeries C(N - 1 > 0 ? N - 1 : 0, 0.0);
    if (N - 1 == 0) C = DSeries(std::vector<double>{0.0});
    for (int j = 0; j <= N - 1; ++j) C[j] = 3.0 * pf.psi[static_cast<std::size_t>(j)] / (2.0 * j + 3.0);
    DSeries C23 = series_pow(C, 2.0 / 3.0);
    S.v_.assign(static_cast<std::size_t>(N + 1), 0.0);
    for (int j = 1; j <= N; ++j) S.v_[static_cast<std::size_t>(j)] = C23[j - 1];
    S.profile_ = pf;

    S.h_.assign(static_cast<std::size_t>(npts), {});
    for (int i = 0; i < npts; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      BSeries T(N, DSeries(Mi, 0.0));
      for (int k = 1; k <= N; ++k) T[k] = S.t_[ii][static_cast<std::size_t>(k - 1)];
      BSeries H = apply_coefficients(S.v_, T);
      for (int k = 1; k <= N; ++k) S.h_[ii].push_back(H[k].truncated(Mi - 2 * (k - 1)).truncated(Mi));
    }
    S.renormalized_ = true;
  }
  return S;
}

double invariance_defect(const InvariantSeries& ser, const BilliardMap& map, int n, double y,
                         const std::vector<double>& probes, SeriesKind kind) {
  auto value = [&](double s, double yy) {
    switch (kind) {
      case SeriesKind::G: return ser.g_value(s, yy, n);
      case SeriesKind::T: return ser.t_value(s, yy, n);
      case SeriesKind::H: return ser.h_value(s, yy, n);
    }
    return 0.0;
  };
  double worst = 0.0;
  for (double s : probes) {
    double s2, y2;
    map.step_sy(s, y, s2, y2);
    worst = std::max(worst, std::fabs(value(s2, y2) - value(s, y)));
  }
  return worst;
}

}  // namespace billiards
