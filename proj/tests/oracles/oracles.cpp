#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracles {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CircleStep circle_step(double R, double s, double phi) { return {s + 2.0 * R * phi, phi}; }

double circle_caustic_radius(double R, double phi) { return R * std::cos(phi); }

double circle_lazutkin_parameter(double R, double s) { return s * std::pow(2.0 * std::sqrt(2.0) * R, -2.0 / 3.0); }

double circle_lazutkin_length(double R) { return 2.0 * kPi * std::cbrt(R); }

double ellipse_conserved(double a, double b, double x1, double y1, double x2, double y2) {
  double dx = x2 - x1, dy = y2 - y1, len = std::hypot(dx, dy);
  if (!(len > 0.0)) throw NoRealTangency("degenerate chord");
  double nx = -dy / len, ny = dx / len;
  double p = nx * x1 + ny * y1;
  double l = a * a * nx * nx + b * b * ny * ny - p * p;
  // l <= 0: the line misses the ellipse; l >= a^2 only for the major axis itself.
  if (!(l > 0.0) || !(l < a * a)) throw NoRealTangency("no confocal conic is tangent to this line");
  return l;
}

double ellipse_point_confocal(double a, double b, double x, double y) {
  double B = a * a + b * b - x * x - y * y;
  double C = a * a * b * b - b * b * x * x - a * a * y * y;
  double disc = B * B - 4.0 * C;
  if (disc < 0.0) throw NoRealTangency("no confocal conic through this point");
  // stable form of the smaller root
  double q = 0.5 * (B + std::sqrt(disc));
  return C / q;
}

double graph_curvature(double fp, double fpp) { return fpp / std::pow(1.0 + fp * fp, 1.5); }

double ellipse_curvature(double a, double b, double t) {
  double q = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
  return a * b / std::pow(q, 1.5);
}

double ellipse_curvature_ds(double a, double b, double t) {
  double st = std::sin(t), ct = std::cos(t);
  double q = a * a * st * st + b * b * ct * ct;
  double dq = 2.0 * (a * a - b * b) * st * ct;
  double dk_dt = -1.5 * a * b * dq / std::pow(q, 2.5);
  return dk_dt / std::sqrt(q);
}

double graph_lazutkin_length(const std::function<double(double)>& fp, const std::function<double(double)>& fpp,
                             double x0, double x1) {
  auto f = [&](double x) { return std::cbrt(fpp(x) * fpp(x)) / std::sqrt(1.0 + fp(x) * fp(x)); };
  if (std::isinf(x0) && std::isinf(x1)) {
    boost::math::quadrature::sinh_sinh<double> q;
    return q.integrate(f);
  }
  if (std::isinf(x1)) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double u) { return f(x0 + u); });
  }
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, x0, x1);
}

double ellipse_arc_lazutkin_length(double a, double b, double t0, double t1) {
  boost::math::quadrature::tanh_sinh<double> q;
  double k = std::cbrt(a * b * a * b);
  return q.integrate(
      [&](double t) {
        double st = std::sin(t), ct = std::cos(t);
        return k / std::sqrt(a * a * st * st + b * b * ct * ct);
      },
      t0, t1);
}

double bruteforce_invariance(const Field& g, const Step& step, const std::vector<std::pair<double, double>>& grid) {
  double worst = 0.0;
  for (const auto& [t, h] : grid) {
    double t2, h2;
    step(t, h, t2, h2);
    worst = std::max(worst, std::fabs(g(t2, h2) - g(t, h)));
  }
  return worst;
}

std::vector<std::pair<double, double>> tensor_grid(double t0, double t1, int nt, double h0, double h1, int nh) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nh; ++j)
      out.emplace_back(t0 + (t1 - t0) * i / std::max(1, nt - 1), h0 + (h1 - h0) * j / std::max(1, nh - 1));
  return out;
}

}  // namespace oracles
