#include "billiards/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ModelMap::forward(double tau, double phi, double& tau2, double& phi2) const {
  tau2 = tau + phi;
  phi2 = phi;
}

void ModelMap::backward(double tau, double phi, double& tau2, double& phi2) const {
  tau2 = tau - phi;
  phi2 = phi;
}

void ChartMap::prepare_levels(const std::vector<double>& levels) {
  for (double c : levels) tables_.push_back(chart_->level_table(c));
}

const LevelTable* ChartMap::table_for(double h) const {
  for (const auto& t : tables_)
    if (std::fabs(h - t.c) <= 1e-8 * t.c) return &t;
  return nullptr;
}

void ChartMap::to_normal(double s, double y, double& tau, double& h) const {
  h = chart_->h(s, y);
  const LevelTable* t = table_for(h);
  tau = t ? chart_->tau(*t, s, y) : chart_->tau(s, y);
}

void ChartMap::from_normal(double tau, double h, double& s, double& y) const {
  if (const LevelTable* t = table_for(h)) chart_->from_normal(*t, tau, h, s, y);
  else chart_->from_normal(tau, h, s, y);
}

void ChartMap::forward(double tau, double phi, double& tau2, double& phi2) const {
  double s, y, s2, y2, h2;
  from_normal(tau, phi * phi, s, y);
  chart_->map().step_sy(s, y, s2, y2);
  if (!(s2 >= chart_->s_lo() && s2 <= chart_->s_hi())) fail(ErrorCode::LevelCurveEscape, "step leaves the chart sub-arc");
  to_normal(s2, y2, tau2, h2);
  phi2 = std::sqrt(h2);
}

void ChartMap::backward(double tau, double phi, double& tau2, double& phi2) const {
  double s, y, s2, y2, h2;
  from_normal(tau, phi * phi, s, y);
  double p = phi_of_y(y);
  Hit hit = chart_->map().second_intersection(s, kPi - p);
  s2 = hit.s;
  y2 = y_of_phi(kPi - hit.phi);
  if (!(s2 >= chart_->s_lo() && s2 <= chart_->s_hi())) fail(ErrorCode::LevelCurveEscape, "step leaves the chart sub-arc");
  to_normal(s2, y2, tau2, h2);
  phi2 = std::sqrt(h2);
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double SectorGluing::rho1(double nu) const { return 1.0 - smooth_step((nu - (0.5 - sigma)) / (2.0 * sigma)); }

bool SectorGluing::in_sector(double tau, double phi) const {
  return phi > 0.0 && phi < eta && tau > -chi * phi && tau < (1.0 + chi) * phi;
}

double SectorGluing::value(double tau, double phi) const {
  double nu = tau / phi;
  double r2 = rho2(nu);
  if (r2 == 0.0) return phi;
  double tb, pb;
  map->backward(tau, phi, tb, pb);
  return rho1(nu) * phi + r2 * pb;
}

SectorGluing glue_on_sector(const LiftedMap& map, double chi, double sigma, double eta) {
  if (!(chi > 0.0 && chi < 0.5)) fail(ErrorCode::Validation, "chi must lie in (0, 1/2)");
  if (!(sigma > 0.0 && 2.0 * sigma < 0.5 - chi)) fail(ErrorCode::Validation, "need 0 < 2 sigma < 1/2 - chi");
  if (!(eta > 0.0)) fail(ErrorCode::Validation, "eta must be positive");
  // F^2 of the doubled sector must leave it.
  const int nphi = 12, nnu = 9;
  for (int i = 1; i <= nphi; ++i) {
    double phi = 2.0 * eta * i / (nphi + 1);
    for (int j = 0; j < nnu; ++j) {
      double tau = (-chi + (1.0 + 2.0 * chi) * (j + 0.5) / nnu) * phi;
      double t1, p1, t2, p2;
      try {
        map.forward(tau, phi, t1, p1);
        map.forward(t1, p1, t2, p2);
      } catch (const Error& e) {
        fail(ErrorCode::SectorTooLarge, std::string("map undefined on the doubled sector (") + e.what() +
                                            "); use a smaller eta");
      }
      if (p2 > 0.0 && p2 < 2.0 * eta && t2 > -chi * p2 && t2 < (1.0 + chi) * p2)
        fail(ErrorCode::SectorTooLarge, "F^2 of the doubled sector meets it; use a smaller eta");
    }
  }
  SectorGluing g;
  g.chi = chi;
  g.sigma = sigma;
  g.eta = eta;
  g.map = &map;
  return g;
}

double FoliationField::dg_dh(double tau, double h) const {
  double e = 1e-4 * h;
  return (g_(tau, h + e) - g_(tau, h - e)) / (2.0 * e);
}

double FoliationField::level_h(double tau, double c) const {
  double h = c;
  for (int it = 0; it < 60; ++it) {
    double d = dg_dh(tau, h);
    if (!(d > 0.5)) fail(ErrorCode::GradientLoss, "dg/dh <= 1/2 on a leaf");
    double step = (g_(tau, h) - c) / d;
    h -= step;
    if (!(h > 0.0)) fail(ErrorCode::GradientLoss, "leaf leaves h > 0");
    if (std::fabs(step) <= 1e-15 * h) break;
  }
  return h;
}

double FoliationField::max_certificate() const {
  double m = 0.0;
  for (const auto& b : certificate) m = std::max(m, b.max_defect);
  return m;
}

int steps_to_fundamental(const LiftedMap& map, double tau, double phi, double& tau_end, double& phi_end,
                         double* drift, int max_steps) {
  int n = 0;
  double acc = 0.0;
  try {
    while (tau < 0.0 || tau >= phi) {
      if (std::abs(n) >= max_steps) fail(ErrorCode::OrbitEscape, "orbit does not reach the fundamental domain");
      double t2, p2;
      if (tau < 0.0) {
        map.forward(tau, phi, t2, p2);
        ++n;
      } else {
        map.backward(tau, phi, t2, p2);
        --n;
      }
      acc += std::fabs(p2 - phi);
      tau = t2;
      phi = p2;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OrbitEscape) throw;
    fail(ErrorCode::OrbitEscape, std::string("orbit leaves the chart: ") + e.what());
  }
  tau_end = tau;
  phi_end = phi;
  if (drift) *drift = acc;
  return n;
}

FoliationField extend_by_dynamics(const SectorGluing& gluing, const ExtensionWindow& window, int max_steps) {
  if (!gluing.map) fail(ErrorCode::Validation, "gluing has no map");
  if (window.levels.empty() || !(window.tau_hi > window.tau_lo)) fail(ErrorCode::Validation, "empty extension window");
  for (double h : window.levels)
    if (!(h > 0.0) || std::sqrt(h) >= gluing.eta) fail(ErrorCode::Validation, "extension level outside the sector height");
  const LiftedMap* map = gluing.map;
  SectorGluing gl = gluing;
  auto g = [gl, map, max_steps](double tau, double h) {
    double te, pe;
    steps_to_fundamental(*map, tau, std::sqrt(h), te, pe, nullptr, max_steps);
    double v = gl.value(te, pe);
    return v * v;
  };
  auto [hmin, hmax] = std::minmax_element(window.levels.begin(), window.levels.end());
  FoliationField field(g, window.tau_lo, window.tau_hi, *hmin, *hmax);
  for (double h : window.levels) {
    double phi = std::sqrt(h);
    int m = static_cast<int>(std::ceil((window.tau_hi - window.tau_lo) / phi * window.points_per_unit));
    m = std::clamp(m, 2, window.max_samples);
    LevelBand band{h, h, 0.0};
    for (int i = 0; i <= m; ++i) {
      double tau = window.tau_lo + (window.tau_hi - window.tau_lo) * i / m;
      double te, pe, drift;
      int n = steps_to_fundamental(*map, tau, phi, te, pe, &drift, max_steps);
      double v = gl.value(te, pe);
      // Gluing adds at most one more step of drift.
      double step_drift = n != 0 ? drift / std::abs(n) : 0.0;
      double bound = drift + step_drift + std::fabs(v - pe);
      field.samples.push_back({tau, h, n, v * v, 2.0 * phi * bound});
      band.max_defect = std::max(band.max_defect, 2.0 * phi * bound);
    }
    field.certificate.push_back(band);
  }
  return field;
}

double FlatPerturbation::operator()(double t, double h) const {
  if (shape) return shape(t, h);
  if (!(h > 0.0)) return 0.0;
  return a * std::exp(-1.0 / (c * h)) * std::sin(2.0 * kPi * t);
}

double FlatPerturbation::sup(double h_max) const {
  if (!shape) return std::fabs(a) * std::exp(-1.0 / (c * h_max));
  double m = 0.0;
  for (int i = 1; i <= 64; ++i)
    for (int j = 0; j < 64; ++j) m = std::max(m, std::fabs(shape(j / 64.0, h_max * i / 64.0)));
  return m;
}

std::vector<FoliationField> perturbed_family(const FlatPerturbation& psi,
                                             const std::vector<std::vector<double>>& weights, double tau_lo,
                                             double tau_hi, double h_lo, double h_hi) {
  if (!(psi.sup(h_hi) < 0.125)) fail(ErrorCode::Validation, "perturbation must satisfy |psi| < 1/8");
  std::vector<FoliationField> out;
  for (const auto& w : weights) {
    for (double e : w)
      if (!(e >= 0.0 && e <= 1.0)) fail(ErrorCode::Validation, "perturbation weights must lie in [0, 1]");
    std::vector<double> coef(w.size());
    double f = 1.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      f *= 4.0 * static_cast<double>(k + 1);
      coef[k] = w[k] / f;
    }
    if (w.size() == 1) coef[0] = w[0];
    FlatPerturbation p = psi;
    auto g = [p, coef](double tau, double h) {
      double q = p(tau / std::sqrt(h), h), pk = 1.0, acc = h;
      for (double ck : coef) {
        pk *= q;
        acc += ck * pk;
      }
      return acc;
    };
    FoliationField field(g, tau_lo, tau_hi, h_lo, h_hi);
    field.weights = w;
    field.epsilon = w.empty() ? 0.0 : w[0];
    // Regularity on a grid resolving the oscillation in tau / sqrt h.
    LevelBand band{h_lo, h_hi, 0.0};
    const int nh = 48;
    for (int i = 0; i <= nh; ++i) {
      double h = h_lo * std::pow(h_hi / h_lo, static_cast<double>(i) / nh);
      int nt = std::clamp(static_cast<int>(std::ceil((tau_hi - tau_lo) / std::sqrt(h) * 16.0)), 16, 20000);
      for (int j = 0; j <= nt; ++j) {
        double tau = tau_lo + (tau_hi - tau_lo) * j / nt;
        if (!(field.dg_dh(tau, h) > 0.5))
          fail(ErrorCode::GradientLoss, "dg/dh <= 1/2 in the window; shrink it or lower the amplitude");
      }
    }
    field.certificate.push_back(band);
    out.push_back(std::move(field));
  }
  return out;
}

std::vector<FoliationField> perturbed_family(const FlatPerturbation& psi, const std::vector<double>& eps,
                                             double tau_lo, double tau_hi, double h_lo, double h_hi) {
  std::vector<std::vector<double>> w;
  for (double e : eps) w.push_back({e});
  return perturbed_family(psi, w, tau_lo, tau_hi, h_lo, h_hi);
}

double field_invariance_defect(const FoliationField& field, const LiftedMap& map, const std::vector<Vec2>& points) {
  double m = 0.0;
  for (const Vec2& x : points) {
    double t2, p2;
    map.forward(x.x, std::sqrt(x.y), t2, p2);
    m = std::max(m, std::fabs(field.value(t2, p2 * p2) - field.value(x.x, x.y)));
  }
  return m;
}

HessianReport hessian_convexity(const std::function<double(double, double)>& g, const std::vector<Vec2>& points,
                                double step, double threshold) {
  HessianReport r;
  r.min_abs = INFINITY;
  int pos = 0, neg = 0;
  const double e = step;
  for (const Vec2& p : points) {
    double f00 = g(p.x, p.y);
    double fpx = g(p.x + e, p.y), fmx = g(p.x - e, p.y);
    double fpy = g(p.x, p.y + e), fmy = g(p.x, p.y - e);
    double fpp = g(p.x + e, p.y + e), fpm = g(p.x + e, p.y - e);
    double fmp = g(p.x - e, p.y + e), fmm = g(p.x - e, p.y - e);
    double gx = (fpx - fmx) / (2 * e), gy = (fpy - fmy) / (2 * e);
    double gxx = (fpx - 2 * f00 + fmx) / (e * e), gyy = (fpy - 2 * f00 + fmy) / (e * e);
    double gxy = (fpp - fpm - fmp + fmm) / (4 * e * e);
    double H = gxx * gy * gy + gyy * gx * gx - 2 * gxy * gx * gy;
    double a = std::fabs(H);
    r.min_abs = std::min(r.min_abs, a);
    r.max_abs = std::max(r.max_abs, a);
    // second differences cannot resolve curvature below the rounding of the samples
    double fmax = std::max({std::fabs(f00), std::fabs(fpx), std::fabs(fmx), std::fabs(fpy), std::fabs(fmy)});
    double noise = 16.0 * std::numeric_limits<double>::epsilon() * fmax / (e * e) * (gx * gx + gy * gy);
    if (a <= std::max(threshold, noise)) ++r.flagged;
    else if (H > 0) ++pos;
    else ++neg;
  }
  if (points.empty()) r.min_abs = 0.0;
  r.sign = (r.flagged == 0 && neg == 0 && pos > 0) ? 1 : (r.flagged == 0 && pos == 0 && neg > 0) ? -1 : 0;
  r.convex = r.sign != 0;
  return r;
}

}  // namespace billiards
