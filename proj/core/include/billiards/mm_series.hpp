#pragma once

// Asymptotic first integral of the billiard map near the boundary:
// coefficients g_k, the symmetrized t_k and the renormalized h_k.

#include <string>
#include <vector>

#include "billiards/billiard.hpp"
#include "billiards/curve.hpp"
#include "billiards/series.hpp"

namespace billiards {

constexpr int kMaxSeriesOrder = 12;

/// Lifted map F(s, z) = (s + sigma, Z) and beta = I o F as z-series whose
/// coefficients are Taylor series in delta = s - s_i.
struct LocalLift {
  double s_i;
  BSeries sigma;  ///< z-order Mz, constant term zero
  BSeries Z;      ///< z-order Mz, constant term zero
  DSeries kappa;  ///< curvature in delta
};

LocalLift local_lift(const ConvexCurve& curve, double s_i, int z_order, int delta_order);

/// Taylor coefficients in z of both components of F and beta at grid points.
struct JetTable {
  std::vector<double> s;
  int order = 0;
  std::vector<std::vector<double>> F1, F2, B1, B2;  ///< [grid][power of z]
  std::vector<double> condition;                     ///< per-point disagreement (finite-difference tables)
};

/// Jets by truncated Taylor arithmetic.
JetTable compute_jets(const ConvexCurve& curve, const std::vector<double>& grid, int order);
/// Jets by central differences of the s_z-chart step with one Richardson pass.
/// Throws IllConditioned when the two step sizes disagree beyond tol.
JetTable compute_jets_fd(const BilliardMap& map, const std::vector<double>& grid, int order, double tol = 1e-4);

/// Grid solution of g' w - (2k/3) w' g = -b with g(s0) = C w(s0)^{2k/3}.
struct OdeSolution {
  std::vector<double> g;
  double max_residual = 0.0;  ///< interior 7-point stencil residual
  double max_b = 0.0;
};
OdeSolution solve_coefficient_ode(int k, const std::vector<double>& s, const std::vector<double>& w,
                                  const std::vector<double>& b, double C);

/// 7-point central derivative on a uniform grid (one-sided near the ends).
std::vector<double> stencil_derivative(const std::vector<double>& f, double h);

struct SeriesOptions {
  int order = 3;
  int eval_order = 12;     ///< delta-order kept for every coefficient
  double spacing = 0.0;    ///< grid spacing in arc length; 0 picks from the curve
  double s_begin = 0.0;    ///< grid window (unwrapped arc length)
  double s_end = 0.0;      ///< 0 together with s_begin means the whole curve
  double profile_y_min = 1e-4;
  double profile_y_max = 2e-2;
  int profile_levels = 12;
  bool renormalize = true;
};

struct ProfileFit {
  std::vector<double> levels;  ///< t values
  std::vector<double> xi;      ///< measured theta-advance
  std::vector<double> psi;     ///< fitted polynomial coefficients of xi / sqrt(t)
  double rms_residual = 0.0;
};

class InvariantSeries {
 public:
  int order() const { return order_; }
  const std::vector<double>& grid() const { return grid_; }
  double spacing() const { return spacing_; }
  double s_begin() const { return grid_.front() - 0.5 * spacing_; }
  double s_end() const { return grid_.back() + 0.5 * spacing_; }
  bool covers(double s) const { return s >= s_begin() && s <= s_end(); }

  /// Coefficient k (1-based) at s, with optional s-derivative order.
  double g(int k, double s, int deriv = 0) const;
  double t(int k, double s, int deriv = 0) const;
  double h(int k, double s, int deriv = 0) const;
  double w(double s) const;

  /// Truncated sums through order n (n <= order()).
  double g_value(double s, double y, int n) const;
  double t_value(double s, double y, int n) const;
  double h_value(double s, double y, int n) const;
  double h_dy(double s, double y, int n) const;
  double h_ds(double s, double y, int n) const;
  double t_dy(double s, double y, int n) const;

  /// t as a series in z at s: odd slots are stored as exact zeros.
  std::vector<double> t_z_coefficients(double s) const;

  const std::vector<double>& v_coefficients() const { return v_; }
  const ProfileFit& profile() const { return profile_; }
  double symmetry_defect() const { return symmetry_defect_; }
  double ode_residual() const { return ode_residual_; }
  bool renormalized() const { return renormalized_; }

  std::string csv() const;

 private:
  friend InvariantSeries build_series(const ConvexCurve& curve, const SeriesOptions& opt);
  int order_ = 0;
  double spacing_ = 0.0;
  std::vector<double> grid_;
  // [point][k-1] delta-series
  std::vector<std::vector<DSeries>> g_, t_, h_;
  std::vector<DSeries> w_;
  std::vector<double> v_;
  ProfileFit profile_;
  double symmetry_defect_ = 0.0;
  double ode_residual_ = 0.0;
  bool renormalized_ = false;

  std::size_t cell(double s) const;
  double eval(const std::vector<std::vector<DSeries>>& tab, int k, double s, int deriv) const;
};

InvariantSeries build_series(const ConvexCurve& curve, const SeriesOptions& opt = {});

/// max over s of |X_n(F(s, y)) - X_n(s, y)| for the truncated h (or t) series.
enum class SeriesKind { G, T, H };
double invariance_defect(const InvariantSeries& ser, const BilliardMap& map, int n, double y,
                         const std::vector<double>& probes, SeriesKind kind = SeriesKind::H);

/// Measured theta-advance of one billiard step along the level set t_n = c starting at s.
double level_advance(const InvariantSeries& ser, const BilliardMap& map, int n, double s, double c);

}  // namespace billiards
