#include "billiards/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "billiards/error.hpp"
#include "billiards/line_space.hpp"
#include "billiards/quadrature.hpp"

namespace billiards {

namespace {
const double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                       0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
const double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                       0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double laz_density(const CurveSource& src, double u) {
  Vec2 p, d1, d2;
  src.eval(u, p, d1, d2);
  double v2 = dot(d1, d1), v = std::sqrt(v2);
  double k = cross(d1, d2) / (v2 * v);
  return 0.5 * std::cbrt(k * k) * v;
}
}  // namespace

LazutkinChart::LazutkinChart(const ConvexCurve& curve, double s0, int panels) : curve_(&curve), s0_(s0) {
  const CurveSource& src = curve.source();
  u_.resize(static_cast<std::size_t>(panels + 1));
  tab_.assign(u_.size(), 0.0);
  for (int i = 0; i <= panels; ++i) u_[static_cast<std::size_t>(i)] = src.u_min + (src.u_max - src.u_min) * i / panels;
  for (int i = 0; i < panels; ++i) {
    double v = gauss16([&](double u) { return laz_density(src, u); }, u_[static_cast<std::size_t>(i)],
                       u_[static_cast<std::size_t>(i + 1)]);
    if (!std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "non-finite Lazutkin density");
    tab_[static_cast<std::size_t>(i + 1)] = tab_[static_cast<std::size_t>(i)] + v;
  }
  total_ = tab_.back();
  t_at_s0_ = 0.0;
  t_at_s0_ = raw(s0);
}

double LazutkinChart::raw(double s) const {
  const CurveSource& src = curve_->source();
  double u = curve_->param_of(s);
  double shift = 0.0;
  if (curve_->closed()) {
    double U = src.u_max - src.u_min;
    double q = std::floor((u - src.u_min) / U);
    u -= q * U;
    shift = q * total_;
  }
  double du = u_[1] - u_[0];
  long k = std::clamp(static_cast<long>(std::floor((u - u_[0]) / du)), 0L, static_cast<long>(u_.size()) - 2);
  return shift + tab_[static_cast<std::size_t>(k)] +
         gauss16([&](double v) { return laz_density(src, v); }, u_[static_cast<std::size_t>(k)], u);
}

double LazutkinChart::t(double s) const { return raw(s) - t_at_s0_; }

double LazutkinChart::s_of_t(double tt) const {
  double s = s0_ + tt * 2.0 / std::cbrt(std::pow(curve_->curvature(s0_), 2.0));
  for (int it = 0; it < 100; ++it) {
    double f = t(s) - tt;
    double k = curve_->curvature(s);
    double step = f / (0.5 * std::cbrt(k * k));
    s -= step;
    if (std::fabs(step) <= 1e-15 * (1.0 + std::fabs(s))) break;
  }
  return s;
}

double LazutkinChart::z(double s, double y) const {
  double k = curve_->curvature(s);
  return std::cbrt(8.0 / (k * k)) * y;
}

double lazutkin_parameter(const ConvexCurve& curve, double s, double s0) {
  if (!curve.in_domain(s) || !curve.in_domain(s0)) fail(ErrorCode::OutOfDomain, "arc length outside domain");
  LazutkinChart c(curve, s0, 512);
  return c.t(s);
}

NormalChart::NormalChart(const InvariantSeries& series, const BilliardMap& map, const NormalChartOptions& opt)
    : ser_(&series), map_(&map), order_(opt.order) {
  if (opt.order < 2) fail(ErrorCode::Validation, "normal chart needs series order >= 2");
  if (opt.order > series.order()) fail(ErrorCode::OrderMismatch, "chart order above series order");
  if (!series.renormalized()) fail(ErrorCode::OrderMismatch, "chart needs the renormalized series");
  s_lo_ = opt.s_lo;
  s_hi_ = opt.s_hi;
  if (s_lo_ == 0.0 && s_hi_ == 0.0) {
    s_lo_ = series.s_begin();
    s_hi_ = series.s_end();
  }
  if (!(s_hi_ > s_lo_) || !series.covers(s_lo_) || !series.covers(s_hi_))
    fail(ErrorCode::OutsideValidity, "chart sub-arc outside the series grid");
  s0_ = opt.s0;
  if (!(s0_ >= s_lo_ && s0_ <= s_hi_)) s0_ = 0.5 * (s_lo_ + s_hi_);
  y_max_ = opt.y_max;
  if (y_max_ <= 0.0) {
    // Largest y (bisection in log y) where the determinant stays within tolerance at sample footpoints.
    auto ok = [&](double y) {
      for (int j = 1; j <= 5; ++j) {
        double s = s_lo_ + (s_hi_ - s_lo_) * j / 6.0;
        try {
          if (det_defect(s, y) > opt.det_tol) return false;
        } catch (const Error&) {
          return false;
        }
      }
      return true;
    };
    y_max_ = 0.3;
    double lo = 1e-6, hi = 0.3;
    if (!ok(lo)) fail(ErrorCode::OutsideValidity, "chart determinant fails at y = 1e-6");
    if (!ok(hi)) {
      for (int it = 0; it < 12; ++it) {
        double mid = std::sqrt(lo * hi);
        if (ok(mid)) lo = mid; else hi = mid;
      }
      y_max_ = lo;
    }
  }
}

bool NormalChart::in_window(double s, double y) const {
  return s >= s_lo_ && s <= s_hi_ && y >= 0.0 && y <= y_max_;
}

double NormalChart::y_on_level(double s, double c, double guess) const {
  if (c == 0.0) return 0.0;
  double y = guess > 0.0 ? guess : c / ser_->h(1, s);
  for (int it = 0; it < 80; ++it) {
    double hy = ser_->h_dy(s, y, order_);
    if (!(hy > 0.0)) fail(ErrorCode::LevelCurveEscape, "level curve turns back (h_y <= 0)");
    double step = (ser_->h_value(s, y, order_) - c) / hy;
    y -= step;
    if (!(y > 0.0)) fail(ErrorCode::LevelCurveEscape, "level curve leaves y > 0");
    if (std::fabs(step) <= 1e-16 * y) break;
  }
  return y;
}

double NormalChart::level_time(double sa, double sb, double c, double ya) const {
  if (sa == sb) return 0.0;
  if (!ser_->covers(sa) || !ser_->covers(sb)) fail(ErrorCode::LevelCurveEscape, "level curve leaves the sub-arc");
  int m = std::max(1, static_cast<int>(std::ceil(std::fabs(sb - sa) / ser_->spacing())));
  double hstep = (sb - sa) / m, acc = 0.0, y = ya;
  for (int p = 0; p < m; ++p) {
    double a = sa + p * hstep;
    for (int j = 0; j < 8; ++j) {
      double u = a + 0.5 * hstep * (kGx[j] + 1.0);
      y = y_on_level(u, c, y);
      acc += kGw[j] * 0.5 * hstep / ser_->h_dy(u, y, order_);
    }
  }
  return acc;
}

double NormalChart::tau(double s, double y) const {
  double c = h(s, y);
  double y0 = y_on_level(s0_, c, y);
  return level_time(s0_, s, c, y0);
}

void NormalChart::to_normal(double s, double y, double& t, double& hh) const {
  hh = h(s, y);
  t = tau(s, y);
}

void NormalChart::from_normal(double t, double hh, double& s, double& y) const {
  s = s0_;
  y = y_on_level(s, hh);
  double cur = 0.0;
  for (int it = 0; it < 60; ++it) {
    double rem = t - cur;
    if (std::fabs(rem) <= 1e-15 * (1.0 + std::fabs(t))) break;
    double snew = s + rem * ser_->h_dy(s, y, order_);
    if (!(snew >= s_lo_ && snew <= s_hi_)) fail(ErrorCode::LevelCurveEscape, "point lies beyond the chart sub-arc");
    cur += level_time(s, snew, hh, y);
    y = y_on_level(snew, hh, y);
    if (snew == s) break;
    s = snew;
  }
}

LevelTable NormalChart::level_table(double c) const {
  LevelTable tb;
  tb.c = c;
  int n = std::max(2, static_cast<int>(std::ceil((s_hi_ - s_lo_) / ser_->spacing())));
  tb.ds = (s_hi_ - s_lo_) / n;
  double dc = 1e-4 * c;
  double ya = y_on_level(s_lo_, c), yp = y_on_level(s_lo_, c + dc), ym = y_on_level(s_lo_, c - dc);
  double acc = 0.0, dacc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double si = s_lo_ + i * tb.ds;
    if (i > 0) {
      double sp = si - tb.ds;
      acc += level_time(sp, si, c, ya);
      dacc += (level_time(sp, si, c + dc, yp) - level_time(sp, si, c - dc, ym)) / (2.0 * dc);
      ya = y_on_level(si, c, ya);
      yp = y_on_level(si, c + dc, yp);
      ym = y_on_level(si, c - dc, ym);
    }
    tb.s.push_back(si);
    tb.y.push_back(ya);
    tb.tau.push_back(acc);
    tb.dtau_dh.push_back(dacc);
  }
  // Shift so that tau vanishes at the section.
  std::size_t i0 = std::min(tb.s.size() - 2, static_cast<std::size_t>((s0_ - s_lo_) / tb.ds));
  double at0 = tb.tau[i0] + level_time(tb.s[i0], s0_, c, tb.y[i0]);
  double f = (s0_ - tb.s[i0]) / tb.ds;
  double d0 = (1.0 - f) * tb.dtau_dh[i0] + f * tb.dtau_dh[i0 + 1];
  for (std::size_t i = 0; i < tb.s.size(); ++i) {
    tb.tau[i] -= at0;
    tb.dtau_dh[i] -= d0;
  }
  return tb;
}

double NormalChart::tau(const LevelTable& tb, double s, double y) const {
  if (!(s >= s_lo_ && s <= s_hi_)) fail(ErrorCode::LevelCurveEscape, "point lies beyond the chart sub-arc");
  std::size_t i = std::min(tb.s.size() - 2, static_cast<std::size_t>((s - s_lo_) / tb.ds));
  double f = (s - tb.s[i]) / tb.ds;
  return tb.tau[i] + level_time(tb.s[i], s, tb.c, tb.y[i]) +
         (h(s, y) - tb.c) * ((1.0 - f) * tb.dtau_dh[i] + f * tb.dtau_dh[i + 1]);
}

void NormalChart::from_normal(const LevelTable& tb, double t, double hh, double& s, double& y) const {
  // tau(x, c + dh) = tau(x, c) + dh dtau/dh + O(dh^2)
  auto tau_at = [&](double x, double& yx) {
    std::size_t i = std::min(tb.s.size() - 2, static_cast<std::size_t>(std::max(0.0, (x - s_lo_) / tb.ds)));
    yx = y_on_level(x, hh, tb.y[i]);
    return tau(tb, x, yx);
  };
  // Bracket from the table, then Newton with dtau/ds = 1/h_y.
  auto it = std::upper_bound(tb.tau.begin(), tb.tau.end(), t);
  if (it == tb.tau.begin() || it == tb.tau.end())
    fail(ErrorCode::LevelCurveEscape, "point lies beyond the chart sub-arc");
  std::size_t i = static_cast<std::size_t>(it - tb.tau.begin()) - 1;
  s = tb.s[i] + tb.ds * (t - tb.tau[i]) / (tb.tau[i + 1] - tb.tau[i]);
  for (int k = 0; k < 30; ++k) {
    double cur = tau_at(s, y);
    double snew = s + (t - cur) * ser_->h_dy(s, y, order_);
    if (!(snew >= s_lo_ && snew <= s_hi_)) fail(ErrorCode::LevelCurveEscape, "point lies beyond the chart sub-arc");
    bool done = std::fabs(snew - s) <= 1e-15 * (1.0 + std::fabs(s));
    s = snew;
    if (done) break;
  }
  y = y_on_level(s, hh, y);
}

void NormalChart::step(double t, double hh, double& t2, double& h2) const {
  double s, y;
  from_normal(t, hh, s, y);
  double s2, y2;
  map_->step_sy(s, y, s2, y2);
  if (!(s2 >= s_lo_ && s2 <= s_hi_)) fail(ErrorCode::LevelCurveEscape, "step leaves the chart sub-arc");
  to_normal(s2, y2, t2, h2);
}

double NormalChart::det_defect(double s, double y) const {
  PlaneMap f = [&](double a, double b, double& o1, double& o2) { to_normal(a, b, o1, o2); };
  Jacobian2 J = numeric_jacobian(f, s, y, 1e-4 * ser_->spacing() * 10.0, 1e-3 * y);
  return std::fabs(J.det() - 1.0);
}

PhasePoint to_chart(const PhasePoint& p, Chart target, const NormalChart* chart, const LazutkinChart* laz) {
  if (p.chart == target) return p;
  auto basic = [](Chart c) { return c == Chart::SPhi || c == Chart::SY || c == Chart::SZ; };
  PhasePoint sy;
  if (basic(p.chart)) {
    sy = convert_chart(p, Chart::SY);
  } else if (p.chart == Chart::TauH) {
    if (!chart) fail(ErrorCode::OutsideValidity, "tau_h chart not available");
    double s, y;
    chart->from_normal(p.c1, p.c2, s, y);
    sy = {Chart::SY, s, y};
  } else {
    if (!laz) fail(ErrorCode::OutsideValidity, "Lazutkin chart not available");
    double s = laz->s_of_t(p.c1);
    double k = laz->z(s, 1.0);
    sy = {Chart::SY, s, p.c2 / k};
  }
  if (basic(target)) return convert_chart(sy, target);
  if (target == Chart::TauH) {
    if (!chart) fail(ErrorCode::OutsideValidity, "tau_h chart not available");
    if (!chart->in_window(sy.c1, sy.c2)) fail(ErrorCode::OutsideValidity, "point outside the certified chart window");
    double t, h;
    chart->to_normal(sy.c1, sy.c2, t, h);
    return {Chart::TauH, t, h};
  }
  if (!laz) fail(ErrorCode::OutsideValidity, "Lazutkin chart not available");
  return {Chart::LazutkinTZ, laz->t(sy.c1), laz->z(sy.c1, sy.c2)};
}

}  // namespace billiards
