#pragma once

// Lazutkin parameter and the (tau, h) chart in which the billiard step is (tau + sqrt h, h) up to flat terms.

#include <vector>

#include "billiards/billiard.hpp"
#include "billiards/mm_series.hpp"

namespace billiards {

/// t_L(s) = integral of w^{-2/3} = kappa^{2/3} / 2 from s0, with a cumulative table.
class LazutkinChart {
 public:
  LazutkinChart(const ConvexCurve& curve, double s0 = 0.0, int panels = 2048);
  double t(double s) const;
  double s_of_t(double t) const;
  /// Fiber coordinate w^{2/3}(s) y.
  double z(double s, double y) const;
  /// t_L over the working window [0, L].
  double total() const { return total_; }

 private:
  const ConvexCurve* curve_;
  double s0_, total_, t_at_s0_;
  std::vector<double> u_, tab_;
  double raw(double s) const;
};

double lazutkin_parameter(const ConvexCurve& curve, double s, double s0 = 0.0);

struct NormalChartOptions {
  int order = 3;
  double s0 = 0.0;            ///< section tau = 0
  double s_lo = 0.0, s_hi = 0.0;  ///< sub-arc (unwrapped arc length)
  double y_max = 0.0;         ///< 0 certifies it by bisection
  double det_tol = 1e-3;
};

/// Cumulative tau along one level h = c at uniform nodes of the sub-arc, with d tau / d h.
struct LevelTable {
  double c = 0.0;
  double ds = 0.0;
  std::vector<double> s, y, tau, dtau_dh;
};

class NormalChart {
 public:
  NormalChart(const InvariantSeries& series, const BilliardMap& map, const NormalChartOptions& opt);

  double h(double s, double y) const { return ser_->h_value(s, y, order_); }
  /// Hamiltonian time of h from the section, along the level curve through (s, y).
  double tau(double s, double y) const;
  void to_normal(double s, double y, double& tau, double& h) const;
  void from_normal(double tau, double h, double& s, double& y) const;
  LevelTable level_table(double c) const;
  /// Inverse of to_normal for h near table.c, to first order in h - table.c.
  void from_normal(const LevelTable& table, double tau, double h, double& s, double& y) const;
  double tau(const LevelTable& table, double s, double y) const;
  /// y on the level h = c above s.
  double y_on_level(double s, double c, double guess = -1.0) const;
  /// Billiard step transported to (tau, h).
  void step(double tau, double h, double& tau2, double& h2) const;
  /// |det d(tau, h)/d(s, y) - 1|.
  double det_defect(double s, double y) const;

  bool in_window(double s, double y) const;
  double y_max() const { return y_max_; }
  double s0() const { return s0_; }
  double s_lo() const { return s_lo_; }
  double s_hi() const { return s_hi_; }
  int order() const { return order_; }
  const BilliardMap& map() const { return *map_; }
  const InvariantSeries& series() const { return *ser_; }

 private:
  const InvariantSeries* ser_;
  const BilliardMap* map_;
  int order_;
  double s0_, s_lo_, s_hi_, y_max_;
  double level_time(double sa, double sb, double c, double ya) const;
};

/// Conversion of a phase point into the target chart (s_phi, s_y, s_z, tau_h, lazutkin_tz).
PhasePoint to_chart(const PhasePoint& p, Chart target, const NormalChart* chart = nullptr,
                    const LazutkinChart* laz = nullptr);

}  // namespace billiards
