#include "billiards/caustics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "billiards/error.hpp"

namespace billiards {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 normal_at(double vt) { return {std::cos(vt), std::sin(vt)}; }

double curve_scale(const ConvexCurve& c) {
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (int i = 0; i <= 256; ++i) {
    Vec2 P = c.position(c.length() * i / 256.0);
    lo_x = std::min(lo_x, P.x);
    hi_x = std::max(hi_x, P.x);
    lo_y = std::min(lo_y, P.y);
    hi_y = std::max(hi_y, P.y);
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

double y_on_series_level(const InvariantSeries& ser, int order, double s, double c, double guess) {
  double y = guess > 0.0 ? guess : c / ser.h(1, s);
  for (int it = 0; it < 80; ++it) {
    double hy = ser.h_dy(s, y, order);
    if (!(hy > 0.0)) fail(ErrorCode::LevelCurveEscape, "level curve turns back");
    double step = (ser.h_value(s, y, order) - c) / hy;
    y -= step;
    if (!(y > 0.0)) fail(ErrorCode::LevelCurveEscape, "level curve leaves y > 0");
    if (std::fabs(step) <= 1e-16 * y) break;
  }
  return y;
}
}  // namespace

Vec2 DualChart::to_point(const OrientedLine& L) const {
  double p = L.p - dot(L.normal(), origin);
  if (std::fabs(p) <= 1e-9) fail(ErrorCode::ThroughOrigin, "line passes through the duality origin");
  return origin + (1.0 / p) * L.normal();
}

OrientedLine DualChart::to_line(Vec2 X) const {
  Vec2 r = X - origin;
  double m = norm(r);
  if (m <= 1e-300) fail(ErrorCode::ThroughOrigin, "point coincides with the duality origin");
  Vec2 n = (-1.0 / m) * r;
  OrientedLine L{wrap_2pi(angle_of(n) - 0.5 * kPi), -1.0 / m};
  L.p += dot(n, origin);
  return L;
}

Vec2 polar_dual(const OrientedLine& L) { return DualChart{}.to_point(L); }
OrientedLine polar_dual(Vec2 X) { return DualChart{}.to_line(X); }

double CausticCurve::support(double vt) const {
  std::size_t n = vartheta.size();
  double lo = vartheta.front();
  if (closed) {
    vt = lo + std::fmod(vt - lo, period_);
    if (vt < lo) vt += period_;
  } else {
    vt = lo + std::fmod(vt - lo, kTwoPi);
    if (vt < lo) vt += kTwoPi;
    if (vt > vartheta.back()) fail(ErrorCode::OutsideValidity, "normal angle outside the caustic arc");
  }
  auto it = std::upper_bound(vartheta.begin(), vartheta.end(), vt);
  std::size_t k = static_cast<std::size_t>(std::clamp<long>(it - vartheta.begin() - 1, 0, static_cast<long>(n) - 1));
  double x0 = vartheta[k], p0 = p[k], m0 = dp[k], x1, p1, m1;
  if (k + 1 < n) {
    x1 = vartheta[k + 1];
    p1 = p[k + 1];
    m1 = dp[k + 1];
  } else {
    if (!closed) return p0;
    x1 = vartheta[0] + period_;
    p1 = p[0];
    m1 = dp[0];
  }
  std::vector<double> xs{x0, x1}, ys{p0, p1}, ms{m0, m1};
  boost::math::interpolators::cubic_hermite<std::vector<double>> herm(std::move(xs), std::move(ys), std::move(ms));
  return herm(vt);
}

bool CausticCurve::covers(double vt) const {
  if (closed) return true;
  double lo = vartheta.front();
  double v = lo + std::fmod(vt - lo, kTwoPi);
  if (v < lo) v += kTwoPi;
  return v <= vartheta.back();
}

std::string CausticCurve::csv() const {
  std::ostringstream o;
  o.precision(17);
  o << "theta,vartheta,p,x,y,rho,regular\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    o << theta[i] << ',' << vartheta[i] << ',' << p[i] << ',' << points[i].x << ',' << points[i].y << ','
      << rho[i] << ',' << (regular[i] ? 1 : 0) << '\n';
  return o.str();
}

CausticCurve envelope_of_family(const LineFamily& fam, int samples, bool strict) {
  if (samples < 16) fail(ErrorCode::Validation, "envelope needs at least 16 samples");
  if (!(fam.theta_b > fam.theta_a)) fail(ErrorCode::Validation, "empty family range");
  const int pad = fam.closed ? 24 : 0;
  const int n = samples;
  const double dth = (fam.theta_b - fam.theta_a) / n;
  const int total = fam.closed ? n + 2 * pad : n + 1;
  std::vector<double> th(static_cast<std::size_t>(total)), vt(th.size()), pp(th.size());
  std::vector<OrientedLine> lines(th.size());
  for (int i = 0; i < total; ++i) {
    double t = fam.theta_a + (i - pad) * dth;
    OrientedLine L = fam.line(t);
    auto k = static_cast<std::size_t>(i);
    th[k] = t;
    lines[k] = L;
    double v = L.phi_az + 0.5 * kPi;
    if (i > 0) v = vt[k - 1] + wrap_pi(v - vt[k - 1]);
    vt[k] = v;
    pp[k] = L.p;
  }
  using Spline = boost::math::interpolators::cardinal_quintic_b_spline<double>;
  Spline sv(vt, th.front(), dth), sp(pp, th.front(), dth);
  // the spline recomputes its right end from 1/h and can land a few ulps short of the last node
  const double t_hi = th.front() + (total - 1) * dth;
  const double t_max = t_hi - 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(t_hi), (total - 1) * dth);

  CausticCurve c;
  c.level = fam.level;
  c.closed = fam.closed;
  const int first = fam.closed ? pad : 0, last = fam.closed ? pad + n - 1 : n;
  double shift = 0.0;
  for (int i = first; i <= last; ++i) {
    auto k = static_cast<std::size_t>(i);
    double t = th[k];
    double te = std::clamp(t, th.front(), t_max);
    double v1 = sv.prime(te), v2 = sv.double_prime(te);
    double p1 = sp.prime(te), p2 = sp.double_prime(te);
    double pv = p1 / v1;
    double pvv = (p2 * v1 - p1 * v2) / (v1 * v1 * v1);
    double v = vt[k];
    if (c.vartheta.empty()) shift = kTwoPi * std::floor(v / kTwoPi);
    v -= shift;
    Vec2 nn = normal_at(v), tn = perp(nn);
    Vec2 pt = pp[k] * nn + pv * tn;
    double rho = pp[k] + pvv;
    c.theta.push_back(t);
    c.vartheta.push_back(v);
    c.p.push_back(pp[k]);
    c.dp.push_back(pv);
    c.rho.push_back(rho);
    c.points.push_back(pt);
    c.lines.push_back(lines[k]);
    bool reg = rho < 0.0 && v1 > 0.0;
    c.regular.push_back(reg);
    if (!reg) ++c.cusp_points;
  }
  if (fam.closed) c.period_ = kTwoPi * std::round((vt[static_cast<std::size_t>(pad + n)] - vt[static_cast<std::size_t>(pad)]) / kTwoPi);
  if (fam.closed && c.period_ != kTwoPi) fail(ErrorCode::CuspDetected, "closed family does not turn once");
  if (strict && c.cusp_points > 0) fail(ErrorCode::CuspDetected, "envelope has p + p'' >= 0 samples");

  // Residuals: point on line, and 5-point tangent of the point sequence against the line direction.
  std::size_t m = c.points.size();
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 nn = normal_at(c.vartheta[i]);
    c.point_residual = std::max(c.point_residual, std::fabs(dot(nn, c.points[i]) - c.p[i]));
    if (!c.regular[i]) continue;
    auto at = [&](long j) -> const Vec2& {
      if (fam.closed) return c.points[static_cast<std::size_t>((j + static_cast<long>(m)) % static_cast<long>(m))];
      return c.points[static_cast<std::size_t>(j)];
    };
    long j = static_cast<long>(i);
    if (!fam.closed && (j < 2 || j + 2 >= static_cast<long>(m))) continue;
    Vec2 dc = (1.0 / 12.0) * (at(j - 2) - at(j + 2)) + (2.0 / 3.0) * (at(j + 1) - at(j - 1));
    double len = norm(dc);
    if (len == 0.0) continue;
    c.tangency_residual = std::max(c.tangency_residual, std::fabs(cross(dc, c.lines[i].direction())) / len);
  }
  return c;
}

std::vector<double> tangent_normal_angles(const CausticCurve& c, Vec2 x) {
  std::vector<double> roots;
  std::size_t n = c.vartheta.size();
  auto g = [&](double v) { return dot(normal_at(v), x) - c.support(v); };
  auto sample = [&](std::size_t i) { return dot(normal_at(c.vartheta[i]), x) - c.p[i]; };
  std::size_t segs = c.closed ? n : n - 1;
  double g0 = sample(0);
  for (std::size_t i = 0; i < segs; ++i) {
    double a = c.vartheta[i];
    double b = i + 1 < n ? c.vartheta[i + 1] : c.vartheta[0] + kTwoPi;
    double g1 = i + 1 < n ? sample(i + 1) : sample(0);
    if (g0 == 0.0) {
      roots.push_back(a);
    } else if ((g0 < 0.0) != (g1 < 0.0) && g1 != 0.0) {
      boost::uintmax_t it = 100;
      auto r = boost::math::tools::toms748_solve(g, a, b, g0, g1, boost::math::tools::eps_tolerance<double>(50), it);
      roots.push_back(0.5 * (r.first + r.second));
    }
    g0 = g1;
  }
  return roots;
}

TangencyReport tangency_validate(const BilliardMap& map, const CausticCurve& caustic, int n_orbits, int n_steps,
                                 int n_points, double tol_scale) {
  TangencyReport r;
  const ConvexCurve& curve = map.curve();
  r.scale = curve_scale(curve);
  r.tol = tol_scale * r.scale;
  std::vector<std::size_t> reg;
  for (std::size_t i = 0; i < caustic.points.size(); ++i)
    if (caustic.regular[i]) reg.push_back(i);
  if (reg.empty()) return r;
  for (int o = 0; o < n_orbits; ++o) {
    // Launch from the first half of an arc so that orbits run through it.
    std::size_t span = caustic.closed ? reg.size() : reg.size() / 2;
    std::size_t idx = reg[static_cast<std::size_t>((o + 0.5) * span / n_orbits)];
    PhasePoint q;
    try {
      q = map.phase_of_line(caustic.lines[idx]);
    } catch (const Error&) {
      continue;
    }
    for (int j = 0; j < n_steps; ++j) {
      try {
        q = map.step(q);
      } catch (const Error&) {
        break;
      }
      OrientedLine L = map.line_of_phase(q.c1, q.c2);
      double v = L.phi_az + 0.5 * kPi;
      if (!caustic.covers(v)) break;
      r.max_distance = std::max(r.max_distance, std::fabs(L.p - caustic.support(v)));
      ++r.chords;
    }
  }
  for (int k = 0; k < n_points; ++k) {
    double s = curve.closed() ? curve.length() * k / n_points : curve.length() * (k + 0.5) / n_points;
    Vec2 x = curve.position(s);
    std::vector<double> roots = tangent_normal_angles(caustic, x);
    r.max_tangent_lines = std::max(r.max_tangent_lines, static_cast<int>(roots.size()));
    if (roots.size() != 2) continue;
    double tT = curve.tangent_angle(s);
    double a1 = roots[0] - 0.5 * kPi, a2 = roots[1] - 0.5 * kPi;
    r.max_symmetry = std::max(r.max_symmetry, std::fabs(wrap_pi(a1 + a2 - 2.0 * tT)));
    ++r.symmetry_points;
  }
  r.pass = r.chords > 0 && r.symmetry_points > 0 && r.max_distance < r.tol && r.max_symmetry < 1e-6 &&
           r.max_tangent_lines <= 2;
  return r;
}

LineFamily base_leaf(const BilliardMap& map, const InvariantSeries& series, int order, double c, double s_a,
                     double s_b, bool closed) {
  LineFamily f;
  f.theta_a = s_a;
  f.theta_b = s_b;
  f.closed = closed;
  f.level = c;
  const BilliardMap* m = &map;
  const InvariantSeries* ser = &series;
  double period = s_b - s_a;
  f.line = [m, ser, order, c, s_a, period, closed](double s) {
    if (closed) {
      s = s_a + std::fmod(s - s_a, period);
      if (s < s_a) s += period;
    }
    double y = y_on_series_level(*ser, order, s, c, -1.0);
    return m->line_of_phase(s, phi_of_y(y));
  };
  return f;
}

LineFamily field_leaf(const NormalChart& chart, const FoliationField& field, double c) {
  LineFamily f;
  f.theta_a = field.tau_lo();
  f.theta_b = field.tau_hi();
  f.closed = false;
  f.level = c;
  const NormalChart* ch = &chart;
  const FoliationField* fd = &field;
  auto tb = std::make_shared<LevelTable>(chart.level_table(c));
  f.line = [ch, fd, c, tb](double tau) {
    double h = fd->level_h(tau, c);
    double s, y;
    ch->from_normal(*tb, tau, h, s, y);
    return ch->map().line_of_phase(s, phi_of_y(y));
  };
  return f;
}

ConicFit fit_confocal(const std::vector<Vec2>& pts, double a, double b) {
  auto resid = [&](double l, bool worst) {
    double acc = 0.0;
    for (const Vec2& q : pts) {
      double r = q.x * q.x / (a * a - l) + q.y * q.y / (b * b - l) - 1.0;
      acc = worst ? std::max(acc, std::fabs(r)) : acc + r * r;
    }
    return acc;
  };
  auto res = boost::math::tools::brent_find_minima([&](double l) { return resid(l, false); }, -a * a,
                                                   b * b * (1.0 - 1e-12), 60);
  return {res.first, resid(res.first, true)};
}

double distance_to_curve(const ConvexCurve& curve, Vec2 x) {
  const int m = 512;
  double L = curve.length(), best_s = 0.0, best = INFINITY;
  for (int i = 0; i <= m; ++i) {
    double s = L * i / m;
    double d = norm(x - curve.position(s));
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  double s = best_s;
  for (int it = 0; it < 30; ++it) {
    Vec2 r = x - curve.position(s);
    Vec2 T = curve.tangent(s);
    double f = dot(r, T);
    double fp = -1.0 + dot(r, curve.curvature(s) * perp(T));
    double step = f / fp;
    double sn = s - step;
    if (!curve.closed()) sn = std::clamp(sn, 0.0, L);
    if (std::fabs(sn - s) < 1e-15 * (1.0 + L)) {
      s = sn;
      break;
    }
    s = sn;
  }
  return std::min(best, norm(x - curve.position(s)));
}

namespace {
// Distance along the inward normal from position(s) to the first crossing of the caustic polyline.
bool normal_hit(const ConvexCurve& curve, const CausticCurve& c, double s, double& dist) {
  Vec2 P = curve.position(s), N = perp(curve.tangent(s));
  bool found = false;
  dist = INFINITY;
  std::size_t n = c.points.size();
  std::size_t segs = c.closed ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    std::size_t j = (i + 1) % n;
    if (!c.regular[i] || !c.regular[j]) continue;
    double f0 = cross(c.points[i] - P, N), f1 = cross(c.points[j] - P, N);
    if ((f0 < 0.0) == (f1 < 0.0)) continue;
    double t = f0 / (f0 - f1);
    Vec2 q = c.points[i] + t * (c.points[j] - c.points[i]);
    double d = dot(q - P, N);
    // Hits on the far side of an open leaf are closer to another stretch of the boundary.
    if (d > 0.0 && d < dist && distance_to_curve(curve, q) > 0.5 * d) {
      dist = d;
      found = true;
    }
  }
  return found;
}

bool check_nesting(const ConvexCurve& curve, const std::vector<CausticCurve>& leaves) {
  const int m = 96;
  int compared = 0;
  for (int k = 0; k < m; ++k) {
    double s = curve.closed() ? curve.length() * k / m : curve.length() * (k + 0.5) / m;
    double prev = 0.0;
    bool chain = true;
    std::vector<double> d(leaves.size());
    for (std::size_t i = 0; i < leaves.size() && chain; ++i) chain = normal_hit(curve, leaves[i], s, d[i]);
    if (!chain) continue;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (!(d[i] > prev)) return false;
      prev = d[i];
    }
    ++compared;
  }
  return compared > 0;
}
}  // namespace

FoliationAssembly assemble_caustic_foliation(const BilliardMap& map, std::vector<LineFamily> families, int samples) {
  std::sort(families.begin(), families.end(), [](const LineFamily& a, const LineFamily& b) { return a.level < b.level; });
  FoliationAssembly out;
  for (const auto& f : families) out.leaves.push_back(envelope_of_family(f, samples));
  const ConvexCurve& curve = map.curve();
  out.nested = check_nesting(curve, out.leaves);
  if (!out.nested && out.leaves.size() > 1) {
    out.leaves.pop_back();
    out.shrunk = true;
    out.warning = "leaves crossed; dropped the outermost level";
    out.nested = check_nesting(curve, out.leaves);
    if (!out.nested) fail(ErrorCode::LeavesCross, "caustic leaves cross after shrinking the window");
  } else if (!out.nested) {
    fail(ErrorCode::LeavesCross, "no nesting comparison possible");
  }
  out.monotone = true;
  for (const auto& c : out.leaves) {
    double d = 0.0;
    for (std::size_t i = 0; i < c.points.size(); i += 8)
      if (c.regular[i]) d = std::max(d, distance_to_curve(curve, c.points[i]));
    if (!out.hausdorff.empty() && !(d > out.hausdorff.back())) out.monotone = false;
    out.hausdorff.push_back(d);
  }
  const int m = 32;
  for (int k = 0; k < m; ++k) {
    double s = curve.closed() ? curve.length() * k / m : curve.length() * (k + 0.5) / m;
    Vec2 x = curve.position(s);
    for (const auto& c : out.leaves)
      out.max_tangent_lines = std::max(out.max_tangent_lines, static_cast<int>(tangent_normal_angles(c, x).size()));
  }
  return out;
}

}  // namespace billiards
