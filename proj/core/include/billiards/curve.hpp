#pragma once

// Strictly convex plane curves with an arc-length parametrization.

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "billiards/expr.hpp"
#include "billiards/geometry.hpp"
#include "billiards/series.hpp"

namespace billiards {

enum class EndKind { FiniteEndpoint, AsymptoticLine, UnboundedNoAsymptote, Periodic };

const char* end_kind_name(EndKind k);

struct EndBehavior {
  EndKind kind = EndKind::FiniteEndpoint;
  Vec2 direction;  ///< asymptote direction (for AsymptoticLine)
};

struct CurveSpec {
  enum class Kind { Circle, Ellipse, Graph, Sampled };
  Kind kind = Kind::Circle;
  double radius = 1.0;
  double a_axis = 2.0, b_axis = 1.0;
  /// Ellipse parameter sub-range (x = a cos t, y = b sin t); full closed curve if unset.
  std::optional<std::array<double, 2>> t_range;
  std::string expression;
  double x_min = 0.0, x_max = 1.0;  ///< may be infinite for graphs
  /// Finite x-window used for dynamics when the graph range is unbounded.
  double window_min = -10.0, window_max = 10.0;
  std::vector<Vec2> points;
  bool closed_points = false;
  int resolution = 2048;  ///< table panels over the working window
  std::optional<EndKind> end_override[2];
  std::optional<Vec2> origin;

  static CurveSpec circle(double R);
  static CurveSpec ellipse(double a, double b);
  static CurveSpec ellipse_arc(double a, double b, double t0, double t1);
  static CurveSpec graph(const std::string& f, double x0, double x1);
  static CurveSpec sampled(std::vector<Vec2> pts, bool closed);
  std::string describe() const;
};

/// Parametric source u -> P(u); subclasses supply values and Taylor expansions.
class CurveSource {
 public:
  virtual ~CurveSource() = default;
  /// P, P', P'' at parameter u.
  virtual void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const = 0;
  /// Third derivative (for curvature derivatives).
  virtual Vec2 eval3(double u) const = 0;
  /// Taylor coefficients of x(u+e), y(u+e) in e.
  virtual void taylor(double u, int order, DSeries& x, DSeries& y) const = 0;
  double u_min = 0.0, u_max = 1.0;
  bool periodic = false;
};

class ConvexCurve {
 public:
  ConvexCurve() = default;

  const CurveSpec& spec() const { return spec_; }
  bool closed() const { return closed_; }
  /// Total arc length of the working window (the period for closed curves).
  double length() const { return s_table_.back(); }
  double s_min() const { return 0.0; }
  double s_max() const { return length(); }
  bool in_domain(double s) const;
  /// Unbounded flag of each end of the underlying curve (graphs with infinite range).
  bool unbounded(int end) const { return unbounded_[end]; }
  const EndBehavior& end_behavior(int end) const { return ends_[end]; }
  Vec2 origin() const { return origin_; }

  Vec2 position(double s) const;
  Vec2 tangent(double s) const;
  Vec2 normal(double s) const { return perp(tangent(s)); }
  double curvature(double s) const;
  /// d kappa / ds.
  double curvature_derivative(double s) const;
  /// Tangent azimuth (continuous along the working window).
  double tangent_angle(double s) const;

  double param_of(double s) const;
  double s_of(double u) const;
  const CurveSource& source() const { return *src_; }

  /// Reduce s modulo the period for closed curves; identity otherwise.
  double reduce(double s) const;

  /// Precise chord data between parameters u1 and u2 (u2 may be less than u1).
  struct ChordData {
    double sigma;  ///< signed arc length from u1 to u2
    double turn;   ///< tangent turning angle from u1 to u2
    double par;    ///< chord component along T(u1)
    double perp;   ///< chord component along N(u1)
  };
  ChordData chord_data(double u1, double u2) const;
  double arclength_between(double u1, double u2) const;

  /// Taylor coefficients of position and curvature in arc length around s.
  void arc_taylor(double s, int order, DSeries& x, DSeries& y, DSeries& kappa) const;

  /// Points (s, x, y, kappa) on a uniform s-grid.
  std::string to_csv(int samples) const;

 private:
  friend ConvexCurve build_curve(const CurveSpec& spec);
  CurveSpec spec_;
  std::shared_ptr<const CurveSource> src_;
  bool closed_ = false;
  bool unbounded_[2] = {false, false};
  EndBehavior ends_[2];
  Vec2 origin_;
  std::vector<double> u_table_, s_table_, angle_table_;
  double angle0_ = 0.0;

  int panel_of_u(double u) const;
};

ConvexCurve build_curve(const CurveSpec& spec);
double curvature_at(const ConvexCurve& curve, double s);

/// Arc-length parametrization of a point list or expression graph.
struct ArcLengthMap {
  ConvexCurve curve;
  double length;
  Vec2 position(double s) const { return curve.position(s); }
  double curvature(double s) const { return curve.curvature(s); }
};
ArcLengthMap arclength_reparametrize(const std::vector<Vec2>& points, bool closed);
ArcLengthMap arclength_reparametrize(const std::string& expression, double x0, double x1);

/// Infer end behaviour of a graph y = f(x) at +infinity (dir=+1) or -infinity (dir=-1).
EndBehavior infer_graph_end(const Expr& f, int dir);

}  // namespace billiards
