#pragma once

// Oriented lines in the (azimuth, signed distance) chart, with dphi ^ dp.

#include <functional>
#include <vector>

#include "billiards/curve.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

/// Line {x : n(phi_az) . x = p}, directed by (cos phi_az, sin phi_az).
/// p > 0 when the line runs clockwise around the origin.
struct OrientedLine {
  double phi_az = 0.0;
  double p = 0.0;

  Vec2 direction() const { return from_angle(phi_az); }
  Vec2 normal() const { return perp(direction()); }
  /// Foot of the perpendicular from the origin.
  Vec2 foot() const { return p * normal(); }
  /// Same line with reversed orientation.
  OrientedLine reversed() const;
};

OrientedLine line_through(Vec2 q, Vec2 u);

/// Line through position(s1), position(s2), oriented from s1 to s2; tangent line when s1 == s2.
OrientedLine chord_to_line(const ConvexCurve& curve, double s1, double s2);

struct ChordCoordinates {
  double s1, s2;
  double alpha;  ///< (s1 + s2) / 2
  double psi;    ///< ((s2 - s1) / 2)^2
};
ChordCoordinates chord_coordinates(double s1, double s2);

using LineMap = std::function<OrientedLine(const OrientedLine&)>;

/// 2x2 Jacobian of a planar map by Richardson-extrapolated central differences.
struct Jacobian2 {
  double a, b, c, d;  ///< [[da1/dx1, da1/dx2], [da2/dx1, da2/dx2]]
  double det() const { return a * d - b * c; }
};
using PlaneMap = std::function<void(double, double, double&, double&)>;
Jacobian2 numeric_jacobian(const PlaneMap& f, double x1, double x2, double h1, double h2);

/// max |det D(map) - 1| over the samples in the (phi_az, p) chart.
double symplectic_area_defect(const LineMap& map, const std::vector<OrientedLine>& samples,
                              double h = 1e-5);

}  // namespace billiards
