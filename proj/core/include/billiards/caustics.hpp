#pragma once

// Caustics as envelopes of invariant line families: polar duality, support-function
// envelopes, tangency validation and assembly of nested leaves.

#include <functional>
#include <string>
#include <vector>

#include "billiards/billiard.hpp"
#include "billiards/foliation.hpp"
#include "billiards/line_space.hpp"

namespace billiards {

/// Polar duality with respect to the unit circle centred at origin.
struct DualChart {
  Vec2 origin{};
  /// Line (phi_az, p) -> point n / p relative to origin; ThroughOrigin if |p| <= 1e-9.
  Vec2 to_point(const OrientedLine& L) const;
  /// Point -> its polar line, oriented so that the origin lies on its left.
  OrientedLine to_line(Vec2 X) const;
};

Vec2 polar_dual(const OrientedLine& L);
OrientedLine polar_dual(Vec2 X);

/// One-parameter family of oriented lines on [theta_a, theta_b]; closed families are periodic.
struct LineFamily {
  std::function<OrientedLine(double)> line;
  double theta_a = 0.0, theta_b = 1.0;
  bool closed = false;
  double level = 0.0;
};

class CausticCurve {
 public:
  double level = 0.0;
  bool closed = false;
  std::vector<double> theta;      ///< family parameter
  std::vector<double> vartheta;   ///< normal angle phi_az + pi/2, unwrapped
  std::vector<double> p, dp;      ///< support value and its vartheta-derivative
  std::vector<double> rho;        ///< p + p'' (negative on a regular caustic)
  std::vector<Vec2> points;
  std::vector<OrientedLine> lines;
  std::vector<bool> regular;      ///< false on flagged cusp segments
  double point_residual = 0.0;    ///< max |n . c - p|
  double tangency_residual = 0.0; ///< max |dc x d| / |dc|
  int cusp_points = 0;

  /// Support value at normal angle vt (cubic Hermite in (vartheta, p, p')).
  double support(double vt) const;
  /// Whether vt lies in the covered range (always for closed curves).
  bool covers(double vt) const;
  std::string csv() const;

 private:
  friend CausticCurve envelope_of_family(const LineFamily&, int, bool);
  double period_ = 0.0;
};

/// Envelope by the support-function formula with quintic-spline derivatives in theta.
/// strict = true throws CuspDetected when any sample has p + p'' >= 0.
CausticCurve envelope_of_family(const LineFamily& family, int samples = 4096, bool strict = false);

struct TangencyReport {
  double max_distance = 0.0;      ///< max |p(chord) - support| along orbits
  double max_symmetry = 0.0;      ///< max reflection-symmetry defect (rad)
  int chords = 0;
  int symmetry_points = 0;
  int max_tangent_lines = 0;      ///< most tangent lines through a sampled boundary point
  double scale = 1.0;
  double tol = 0.0;
  bool pass = false;
};

/// Launches n_orbits chords tangent to the caustic and iterates n_steps reflections; samples
/// n_points boundary points for the two-tangent-lines symmetry.
TangencyReport tangency_validate(const BilliardMap& map, const CausticCurve& caustic, int n_orbits = 8,
                                 int n_steps = 200, int n_points = 64, double tol_scale = 1e-5);

/// Two tangent lines through x (normal angles), found from sign changes of n . x - support.
std::vector<double> tangent_normal_angles(const CausticCurve& caustic, Vec2 x);

/// Leaf {h = c} of the base foliation parametrized by s over [s_a, s_b].
LineFamily base_leaf(const BilliardMap& map, const InvariantSeries& series, int order, double c, double s_a,
                     double s_b, bool closed);
/// Leaf {g = c} of a field in a normal chart, parametrized by tau over the field window.
LineFamily field_leaf(const NormalChart& chart, const FoliationField& field, double c);

struct ConicFit {
  double lambda = 0.0;
  double residual = 0.0;  ///< max |x^2/(a^2-l) + y^2/(b^2-l) - 1|
};
/// Single confocal parameter fitted to envelope points of an ellipse(a, b) centred at the origin.
ConicFit fit_confocal(const std::vector<Vec2>& pts, double a, double b);

struct FoliationAssembly {
  std::vector<CausticCurve> leaves;
  bool nested = false;
  bool shrunk = false;
  std::vector<double> hausdorff;   ///< one-sided distance of each leaf to the curve
  bool monotone = false;
  int max_tangent_lines = 0;
  std::string warning;
};

/// Builds caustics for each family, checks nesting along inward normals, monotone approach to the curve,
/// and at most two tangent lines through sampled boundary points. LeavesCross if nesting fails after one shrink.
FoliationAssembly assemble_caustic_foliation(const BilliardMap& map, std::vector<LineFamily> families,
                                             int samples = 4096);

/// Distance from x to the curve (dense sample then Newton on the foot).
double distance_to_curve(const ConvexCurve& curve, Vec2 x);

}  // namespace billiards
