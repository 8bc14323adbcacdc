#pragma once

// Invariant foliations near the boundary: partition-of-unity gluing on a sector,
// extension along orbits, and flat perturbations of the base foliation.

#include <functional>
#include <memory>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/normal_form.hpp"

namespace billiards {

/// A map in the lifted chart (tau, phi), phi = sqrt(h).
class LiftedMap {
 public:
  virtual ~LiftedMap() = default;
  virtual void forward(double tau, double phi, double& tau2, double& phi2) const = 0;
  virtual void backward(double tau, double phi, double& tau2, double& phi2) const = 0;
};

/// (tau, phi) -> (tau + phi, phi).
class ModelMap : public LiftedMap {
 public:
  void forward(double tau, double phi, double& tau2, double& phi2) const override;
  void backward(double tau, double phi, double& tau2, double& phi2) const override;
};

/// The billiard step read in a normal chart.
class ChartMap : public LiftedMap {
 public:
  explicit ChartMap(const NormalChart& chart) : chart_(&chart) {}
  void forward(double tau, double phi, double& tau2, double& phi2) const override;
  void backward(double tau, double phi, double& tau2, double& phi2) const override;
  const NormalChart& chart() const { return *chart_; }
  /// Tabulates the given levels; steps on orbits within 1e-8 relative of one use the table.
  void prepare_levels(const std::vector<double>& levels);

 private:
  const NormalChart* chart_;
  std::vector<LevelTable> tables_;
  const LevelTable* table_for(double h) const;
  void to_normal(double s, double y, double& tau, double& h) const;
  void from_normal(double tau, double h, double& s, double& y) const;
};

/// Smooth ramp: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

struct SectorGluing {
  double chi = 0.3, sigma = 0.05, eta = 0.0;
  const LiftedMap* map = nullptr;

  double rho1(double nu) const;
  double rho2(double nu) const { return 1.0 - rho1(nu); }
  bool in_sector(double tau, double phi) const;
  /// rho1(nu) phi + rho2(nu) phi(F^{-1} x) with nu = tau / phi.
  double value(double tau, double phi) const;
};

/// Throws SectorTooLarge when F^2 of the doubled sector meets it.
SectorGluing glue_on_sector(const LiftedMap& map, double chi, double sigma, double eta);

struct FieldSample {
  double tau, h;
  int n_steps;       ///< signed number of steps to the fundamental domain
  double value;      ///< g(tau, h)
  double bound;      ///< accumulated per-step defect along the orbit
};

struct LevelBand {
  double h_lo, h_hi;
  double max_defect;
};

/// Invariant function g(tau, h) with leaves {g = const}; values are in units of h.
class FoliationField {
 public:
  FoliationField() = default;
  FoliationField(std::function<double(double, double)> g, double tau_lo, double tau_hi, double h_lo, double h_hi)
      : g_(std::move(g)), tau_lo_(tau_lo), tau_hi_(tau_hi), h_lo_(h_lo), h_hi_(h_hi) {}

  double value(double tau, double h) const { return g_(tau, h); }
  double dg_dh(double tau, double h) const;
  /// h on the leaf g = c above tau (Newton from h = c).
  double level_h(double tau, double c) const;

  double tau_lo() const { return tau_lo_; }
  double tau_hi() const { return tau_hi_; }
  double h_lo() const { return h_lo_; }
  double h_hi() const { return h_hi_; }

  std::vector<FieldSample> samples;
  std::vector<LevelBand> certificate;
  double max_certificate() const;
  double epsilon = 0.0;
  std::vector<double> weights;

 private:
  std::function<double(double, double)> g_;
  double tau_lo_ = 0, tau_hi_ = 0, h_lo_ = 0, h_hi_ = 0;
};

struct ExtensionWindow {
  double tau_lo, tau_hi;
  std::vector<double> levels;  ///< h values of the bands
  int points_per_unit = 4;     ///< tau samples per orbit step (per sqrt(level))
  int max_samples = 400;
};

/// Extends the glued function to the window by iterating into the fundamental domain 0 <= tau / phi < 1.
FoliationField extend_by_dynamics(const SectorGluing& gluing, const ExtensionWindow& window, int max_steps = 200000);

/// Number of steps taking (tau, phi) into the fundamental domain; OrbitEscape past max_steps or on chart failure.
int steps_to_fundamental(const LiftedMap& map, double tau, double phi, double& tau_end, double& phi_end,
                         double* drift = nullptr, int max_steps = 200000);

struct FlatPerturbation {
  double a = 1e-2;
  double c = 10.0;
  std::function<double(double, double)> shape;  ///< overrides the default when set

  double operator()(double t, double h) const;
  /// max |psi| over the cylinder for h <= h_max.
  double sup(double h_max) const;
};

/// g_eps(tau, h) = h + sum_k eps_k / (k! 4^k) psi(tau / sqrt h, h)^k for each weight vector;
/// a one-element vector gives h + eps psi. Throws GradientLoss if dg/dh <= 1/2 on the window.
std::vector<FoliationField> perturbed_family(const FlatPerturbation& psi,
                                             const std::vector<std::vector<double>>& weights, double tau_lo,
                                             double tau_hi, double h_lo, double h_hi);
std::vector<FoliationField> perturbed_family(const FlatPerturbation& psi, const std::vector<double>& eps,
                                             double tau_lo, double tau_hi, double h_lo, double h_hi);

/// max over samples of |g(F x) - g(x)|, with F the lifted map (phi = sqrt h).
double field_invariance_defect(const FoliationField& field, const LiftedMap& map, const std::vector<Vec2>& points);

struct HessianReport {
  double min_abs = 0.0;
  double max_abs = 0.0;
  int sign = 0;            ///< common sign of H, 0 if it changes or vanishes
  int flagged = 0;         ///< points with |H| below the threshold
  bool convex = false;
};

/// H(g) = g_xx g_y^2 + g_yy g_x^2 - 2 g_xy g_x g_y by central differences at the given points.
HessianReport hessian_convexity(const std::function<double(double, double)>& g, const std::vector<Vec2>& points,
                                double step, double threshold = 1e-12);

}  // namespace billiards
