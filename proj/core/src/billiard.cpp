#include "billiards/billiard.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::SPhi: return "s_phi";
    case Chart::SY: return "s_y";
    case Chart::SZ: return "s_z";
    case Chart::TauH: return "tau_h";
    case Chart::LazutkinTZ: return "lazutkin_tz";
  }
  return "?";
}

double y_of_phi(double phi) {
  double h = std::sin(0.5 * phi);
  return 2.0 * h * h;
}

double phi_of_y(double y) { return 2.0 * std::asin(std::sqrt(0.5 * y)); }

PhasePoint convert_chart(const PhasePoint& p, Chart target) {
  if (p.chart == target) return p;
  double phi = 0.0;
  switch (p.chart) {
    case Chart::SPhi: phi = p.c2; break;
    case Chart::SY: phi = phi_of_y(p.c2); break;
    case Chart::SZ: phi = 2.0 * std::asin(p.c2 / std::numbers::sqrt2); break;
    default: fail(ErrorCode::OutsideValidity, "conversion needs a normal chart");
  }
  switch (target) {
    case Chart::SPhi: return {target, p.c1, phi};
    case Chart::SY: return {target, p.c1, y_of_phi(phi)};
    case Chart::SZ: return {target, p.c1, std::numbers::sqrt2 * std::sin(0.5 * phi)};
    default: fail(ErrorCode::OutsideValidity, "conversion needs a normal chart");
  }
}

BilliardMap::BilliardMap(ConvexCurve curve) : curve_(std::move(curve)) {}

double BilliardMap::theta_and_data(double u0, double du, ConvexCurve::ChordData& cd) const {
  cd = curve_.chord_data(u0, u0 + du);
  return std::atan2(cd.perp, cd.par);
}

Hit BilliardMap::second_intersection(double s, double phi) const {
  if (!(phi > 0.0 && phi < kPi)) fail(ErrorCode::MapUndefined, "angle outside (0, pi)");
  if (!curve_.in_domain(s)) fail(ErrorCode::OutOfDomain, "footpoint outside domain");
  if (curve_.closed() && (s < 0.0 || s >= curve_.length())) {
    // far from the base period the parameter carries too few digits for the chord angle
    double shift = std::floor(s / curve_.length()) * curve_.length();
    Hit h = second_intersection(s - shift, phi);
    return {h.s + shift, h.phi};
  }
  const CurveSource& src = curve_.source();
  const double u0 = curve_.param_of(s);
  Vec2 P, d1, d2;
  src.eval(u0, P, d1, d2);
  const double speed0 = norm(d1);
  const double kap = cross(d1, d2) / (speed0 * speed0 * speed0);

  if (phi < kAsymptoticPhi) {
    double kp = curve_.curvature_derivative(s);
    double sigma = 2.0 * phi / kap - (4.0 * kp / (3.0 * kap * kap * kap)) * phi * phi;
    double phi2 = phi + (2.0 / 3.0) * kp * phi * phi / (kap * kap);
    if (!curve_.closed() && s + sigma > curve_.length()) fail(ErrorCode::EscapesDomain, "chord leaves the arc");
    return {s + sigma, phi2};
  }

  // Theta(du) - phi is increasing on both branches.
  double a, b, guess;
  ConvexCurve::ChordData cd{};
  if (curve_.closed()) {
    double U = src.u_max - src.u_min;
    a = 0.0;
    b = U;
    guess = 2.0 * phi / (kap * speed0);
  } else {
    double hi = src.u_max - u0;
    if (hi > 0.0 && theta_and_data(u0, hi, cd) >= phi) {
      a = 0.0;
      b = hi;
      guess = 2.0 * phi / (kap * speed0);
    } else {
      double lo = src.u_min - u0;
      if (!(lo < 0.0) || theta_and_data(u0, lo, cd) > phi) fail(ErrorCode::EscapesDomain, "chord leaves the arc");
      a = lo;
      b = 0.0;
      guess = -2.0 * (kPi - phi) / (kap * speed0);
    }
  }
  double x = (guess > a && guess < b) ? guess : 0.5 * (a + b);
  bool converged = false;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double x_best = x, g_best = INFINITY;
  for (int it = 0; it < 200; ++it) {
    double g = theta_and_data(u0, x, cd) - phi;
    if (std::fabs(g) < g_best) {
      g_best = std::fabs(g);
      x_best = x;
    }
    if (g == 0.0) {
      converged = true;
      break;
    }
    if (g < 0.0) a = x; else b = x;
    Vec2 Pv, e1, e2;
    src.eval(u0 + x, Pv, e1, e2);
    double clen = std::hypot(cd.par, cd.perp);
    double dtheta = norm(e1) * std::sin(cd.turn - (g + phi)) / clen;
    double xn = x - g / dtheta;
    if (!(xn > a && xn < b) || !std::isfinite(xn)) xn = 0.5 * (a + b);
    double dx = xn - x;
    x = xn;
    if (std::fabs(dx) <= 4 * eps * std::fabs(x) || b - a <= 8 * eps * std::fabs(x)) {
      converged = true;
      break;
    }
  }
  // Newton can cycle between neighbours of the root: theta carries absolute rounding of a few ulps
  if (!converged && g_best <= 64 * eps * std::max(phi, 1.0)) {
    x = x_best;
    converged = true;
  }
  if (!converged) fail(ErrorCode::RootFindFailure, "second intersection did not converge");
  theta_and_data(u0, x, cd);
  double phi2 = wrap_2pi(cd.turn - phi);
  if (!(phi2 > 0.0 && phi2 < kPi)) fail(ErrorCode::RootFindFailure, "inconsistent reflection angle");
  // Backward-leaning chords on closed curves land behind s.
  if (curve_.closed() && phi > 0.5 * kPi) return {s + cd.sigma - curve_.length(), phi2};
  return {s + cd.sigma, phi2};
}

PhasePoint BilliardMap::involution_beta(const PhasePoint& p) const {
  PhasePoint q = convert_chart(p, Chart::SPhi);
  if (q.c2 > 0.0) {
    Hit h = second_intersection(q.c1, q.c2);
    return {Chart::SPhi, h.s, -h.phi};
  }
  if (q.c2 < 0.0) {
    Hit h = second_intersection(q.c1, q.c2 + kPi);
    return {Chart::SPhi, h.s, kPi - h.phi};
  }
  return q;
}

PhasePoint BilliardMap::involution_I(const PhasePoint& p) { return {p.chart, p.c1, -p.c2}; }

PhasePoint BilliardMap::step(const PhasePoint& p) const {
  if (p.c2 == 0.0) return p;
  PhasePoint q = convert_chart(p, Chart::SPhi);
  Hit h = second_intersection(q.c1, q.c2);
  return convert_chart({Chart::SPhi, h.s, h.phi}, p.chart);
}

PhasePoint BilliardMap::step_back(const PhasePoint& p) const {
  if (p.c2 == 0.0) return p;
  PhasePoint q = convert_chart(p, Chart::SPhi);
  Hit h = second_intersection(q.c1, kPi - q.c2);
  return convert_chart({Chart::SPhi, h.s, kPi - h.phi}, p.chart);
}

void BilliardMap::step_sy(double s, double y, double& s2, double& y2) const {
  if (y == 0.0) {
    s2 = s;
    y2 = 0.0;
    return;
  }
  Hit h = second_intersection(s, phi_of_y(y));
  s2 = h.s;
  y2 = y_of_phi(h.phi);
}

std::vector<double> BilliardMap::line_crossings(const OrientedLine& L) const {
  const CurveSource& src = curve_.source();
  Vec2 n = L.normal();
  auto f = [&](double u) {
    Vec2 P, d1, d2;
    src.eval(u, P, d1, d2);
    return dot(n, P) - L.p;
  };
  // n.P - p has one maximum and one minimum on a convex curve; short chords straddle the
  // maximum, so split at the refined extrema before bracketing.
  const int m = 512;
  double span = src.u_max - src.u_min, du = span / m;
  std::vector<double> us(m + 1), fs(m + 1);
  for (int i = 0; i <= m; ++i) {
    us[i] = src.u_min + du * i;
    fs[i] = f(us[i]);
  }
  std::vector<double> cuts{src.u_min, src.u_max};
  for (int sgn : {1, -1}) {
    int best = 0;
    for (int i = 1; i <= m; ++i)
      if (sgn * fs[i] > sgn * fs[best]) best = i;
    if (best == 0 || best == m) continue;
    auto r = boost::math::tools::brent_find_minima([&](double u) { return -sgn * f(u); }, us[best - 1], us[best + 1], 52);
    cuts.push_back(r.first);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> knots;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    knots.push_back(cuts[c]);
    for (int i = 0; i <= m; ++i)
      if (us[i] > cuts[c] && us[i] < cuts[c + 1]) knots.push_back(us[i]);
  }
  knots.push_back(cuts.back());
  std::vector<double> out;
  double f1 = f(knots[0]);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double u1 = knots[i], u2 = knots[i + 1];
    if (!(u2 > u1)) continue;
    double f2 = f(u2);
    if (f1 == 0.0) f1 = 1e-300;
    if ((f1 < 0.0) != (f2 < 0.0)) {
      boost::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(f, u1, u2, f1, f2, boost::math::tools::eps_tolerance<double>(52),
                                                 iters);
      out.push_back(0.5 * (r.first + r.second));
    }
    f1 = f2;
  }
  return out;
}

OrientedLine BilliardMap::reflect_line(const OrientedLine& L) const {
  // Exit point: the crossing where the direction leaves the convex side.
  const CurveSource& src = curve_.source();
  Vec2 d = L.direction();
  for (double u : line_crossings(L)) {
    Vec2 P, d1, d2;
    src.eval(u, P, d1, d2);
    if (cross(d1, d) < 0.0) {
      Vec2 T = unit(d1);
      Vec2 out = 2.0 * dot(d, T) * T - d;
      return line_through(P, out);
    }
  }
  fail(ErrorCode::MapUndefined, "line misses the curve");
}

PhasePoint BilliardMap::phase_of_line(const OrientedLine& L) const {
  const CurveSource& src = curve_.source();
  Vec2 d = L.direction();
  for (double u : line_crossings(L)) {
    Vec2 P, d1, d2;
    src.eval(u, P, d1, d2);
    if (cross(d1, d) > 0.0) {
      double s = curve_.s_of(u);
      double phi = wrap_2pi(L.phi_az - angle_of(d1));
      return {Chart::SPhi, s, phi};
    }
  }
  fail(ErrorCode::MapUndefined, "line does not enter the curve");
}

OrientedLine BilliardMap::line_of_phase(double s, double phi) const {
  return line_through(curve_.position(s), from_angle(curve_.tangent_angle(s) + phi));
}

Orbit orbit(const BilliardMap& map, const PhasePoint& p0, int n_max, OrbitStop stop, bool backward) {
  (void)stop;  // escape always ends the orbit; Count only documents intent
  Orbit o;
  PhasePoint p = convert_chart(p0, Chart::SPhi);
  if (!(p.c2 > 0.0 && p.c2 < kPi)) fail(ErrorCode::Validation, "initial angle must lie in (0, pi)");
  const ConvexCurve& c = map.curve();
  auto record = [&](int j) {
    o.steps.push_back({j, p.c1, p.c2, y_of_phi(p.c2), c.position(p.c1)});
  };
  record(0);
  for (int j = 1; j <= n_max; ++j) {
    try {
      p = backward ? map.step_back(p) : map.step(p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EscapesDomain) throw;
      o.escaped = true;
      o.stop_reason = "escape";
      return o;
    }
    record(j);
  }
  o.stop_reason = "count";
  return o;
}

std::string orbit_csv(const Orbit& o) {
  std::ostringstream os;
  os << "j,s,phi,y,x_coord,y_coord\n";
  char buf[200];
  for (const auto& st : o.steps) {
    std::snprintf(buf, sizeof buf, "%d,%.15e,%.15e,%.15e,%.15e,%.15e\n", st.j, st.s, st.phi, st.y, st.pos.x,
                  st.pos.y);
    os << buf;
  }
  return os.str();
}

}  // namespace billiards
