#include "billiards/line_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

OrientedLine OrientedLine::reversed() const { return {wrap_2pi(phi_az + std::numbers::pi), -p}; }

OrientedLine line_through(Vec2 q, Vec2 u) {
  double az = wrap_2pi(angle_of(u));
  Vec2 d = from_angle(az);
  return {az, cross(d, q)};
}

OrientedLine chord_to_line(const ConvexCurve& curve, double s1, double s2) {
  if (!curve.in_domain(s1) || !curve.in_domain(s2)) fail(ErrorCode::OutOfDomain, "chord footpoint outside domain");
  Vec2 q = curve.position(s1);
  if (s1 == s2) return line_through(q, curve.tangent(s1));
  // The chord direction comes from the integrated chord data, which stays accurate for short chords.
  double u1 = curve.param_of(s1), u2 = curve.param_of(s2);
  auto cd = curve.chord_data(u1, u2);
  Vec2 t = curve.tangent(s1);
  Vec2 c = cd.par * t + cd.perp * perp(t);
  return line_through(q, unit(c));
}

ChordCoordinates chord_coordinates(double s1, double s2) {
  double b = 0.5 * (s2 - s1);
  return {s1, s2, 0.5 * (s1 + s2), b * b};
}

Jacobian2 numeric_jacobian(const PlaneMap& f, double x1, double x2, double h1, double h2) {
  auto diff = [&](double k1, double k2, double& d1, double& d2) {
    double p1, p2, m1, m2;
    f(x1 + k1, x2 + k2, p1, p2);
    f(x1 - k1, x2 - k2, m1, m2);
    double den = 2.0 * (k1 + k2);
    d1 = (p1 - m1) / den;
    d2 = (p2 - m2) / den;
  };
  double a1, c1, a2, c2, b1, d1, b2, d2;
  diff(h1, 0.0, a1, c1);
  diff(0.5 * h1, 0.0, a2, c2);
  diff(0.0, h2, b1, d1);
  diff(0.0, 0.5 * h2, b2, d2);
  auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
  return {rich(a1, a2), rich(b1, b2), rich(c1, c2), rich(d1, d2)};
}

double symplectic_area_defect(const LineMap& map, const std::vector<OrientedLine>& samples, double h) {
  double worst = 0.0;
  for (const auto& L : samples) {
    OrientedLine base = map(L);
    PlaneMap f = [&](double phi, double p, double& o1, double& o2) {
      OrientedLine r = map({phi, p});
      o1 = base.phi_az + wrap_pi(r.phi_az - base.phi_az);
      o2 = r.p;
    };
    double scale = std::max(1.0, std::fabs(L.p));
    Jacobian2 J = numeric_jacobian(f, L.phi_az, L.p, h, h * scale);
    double d = std::fabs(J.det() - 1.0);
    if (!std::isfinite(d)) fail(ErrorCode::MapUndefined, "non-finite Jacobian");
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace billiards
