#pragma once

// The billiard ball map and its involution factorization in the (s, phi), (s, y), (s, z) charts.

#include <string>
#include <vector>

#include "billiards/curve.hpp"
#include "billiards/line_space.hpp"

namespace billiards {

enum class Chart { SPhi, SY, SZ, TauH, LazutkinTZ };
const char* chart_name(Chart c);

struct PhasePoint {
  Chart chart = Chart::SPhi;
  double c1 = 0.0, c2 = 0.0;
};

/// y = 1 - cos(phi), evaluated as 2 sin^2(phi/2).
double y_of_phi(double phi);
double phi_of_y(double y);

/// Conversion among the s_phi, s_y and s_z charts.
PhasePoint convert_chart(const PhasePoint& p, Chart target);

struct Hit {
  double s;    ///< unwrapped arc length of the second footpoint
  double phi;  ///< angle of the line with the tangent there, in (0, pi)
};

class BilliardMap {
 public:
  explicit BilliardMap(ConvexCurve curve);
  const ConvexCurve& curve() const { return curve_; }

  /// Other intersection of the ray from position(s) at angle phi to the tangent.
  Hit second_intersection(double s, double phi) const;
  /// beta(s, phi) = (s', -phi') with signed phi in (-pi, pi) \ {0}.
  PhasePoint involution_beta(const PhasePoint& p) const;
  static PhasePoint involution_I(const PhasePoint& p);
  /// I o beta in the chart of p (s_phi, s_y or s_z).
  PhasePoint step(const PhasePoint& p) const;
  /// Inverse step (time reversal conjugate).
  PhasePoint step_back(const PhasePoint& p) const;
  /// Step in (s, y) with y = 0 fixed.
  void step_sy(double s, double y, double& s2, double& y2) const;

  /// Reflection of an oriented line at its exit point from the curve.
  OrientedLine reflect_line(const OrientedLine& L) const;
  /// Entry footpoint and angle of a line crossing the curve.
  PhasePoint phase_of_line(const OrientedLine& L) const;
  /// Line leaving position(s) at angle phi to the tangent.
  OrientedLine line_of_phase(double s, double phi) const;
  /// Parameters u where the line meets the curve, in increasing order.
  std::vector<double> line_crossings(const OrientedLine& L) const;

  /// Below this angle the step uses the two-term tangency expansion.
  static constexpr double kAsymptoticPhi = 1e-6;

 private:
  ConvexCurve curve_;
  double theta_and_data(double u0, double du, ConvexCurve::ChordData& cd) const;
};

struct OrbitStep {
  int j;
  double s, phi, y;
  Vec2 pos;
};

struct Orbit {
  std::vector<OrbitStep> steps;
  bool escaped = false;
  std::string stop_reason;
};

enum class OrbitStop { Escape, Count };

/// Iterate from p0 (any of s_phi, s_y, s_z) for at most n_max steps; escape ends the orbit.
Orbit orbit(const BilliardMap& map, const PhasePoint& p0, int n_max, OrbitStop stop = OrbitStop::Escape,
            bool backward = false);

std::string orbit_csv(const Orbit& o);

}  // namespace billiards
