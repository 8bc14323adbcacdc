#include "billiards/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

ChebPanel::ChebPanel(int n) : n_(n) {
  const std::size_t m = static_cast<std::size_t>(n + 1);
  x_.resize(m);
  std::vector<double> theta(m);
  for (int j = 0; j <= n; ++j) {
    theta[static_cast<std::size_t>(j)] = std::numbers::pi * (n - j) / n;
    x_[static_cast<std::size_t>(j)] = std::cos(theta[static_cast<std::size_t>(j)]);
  }
  s_.assign(m * m, 0.0);
  w_.assign(m, 0.0);
  // Build the antiderivative matrix column by column from unit data.
  std::vector<double> c(m + 2), b(m + 2);
  for (int col = 0; col <= n; ++col) {
    for (int k = 0; k <= n; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= n; ++j) {
        double f = (j == col) ? 1.0 : 0.0;
        if (j == 0 || j == n) f *= 0.5;
        acc += f * std::cos(k * theta[static_cast<std::size_t>(j)]);
      }
      c[static_cast<std::size_t>(k)] = 2.0 * acc / n;
    }
    c[0] *= 0.5;
    c[static_cast<std::size_t>(n)] *= 0.5;
    c[static_cast<std::size_t>(n + 1)] = 0.0;
    std::fill(b.begin(), b.end(), 0.0);
    auto C = [&](int k) { return (k >= 0 && k <= n) ? c[static_cast<std::size_t>(k)] : 0.0; };
    b[1] = C(0) - 0.5 * C(2);
    for (int k = 2; k <= n + 1; ++k) b[static_cast<std::size_t>(k)] = (C(k - 1) - C(k + 1)) / (2.0 * k);
    double b0 = 0.0;
    for (int k = 1; k <= n + 1; ++k) b0 -= b[static_cast<std::size_t>(k)] * ((k % 2) ? -1.0 : 1.0);
    b[0] = b0;
    for (int i = 0; i <= n; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= n + 1; ++k) acc += b[static_cast<std::size_t>(k)] * std::cos(k * theta[static_cast<std::size_t>(i)]);
      s_[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(col)] = acc;
    }
    w_[static_cast<std::size_t>(col)] = s_[static_cast<std::size_t>(n) * m + static_cast<std::size_t>(col)];
  }
}

void ChebPanel::cumulative(const double* f, double* out) const {
  const std::size_t m = static_cast<std::size_t>(n_ + 1);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* row = &s_[i * m];
    for (std::size_t j = 0; j < m; ++j) acc += row[j] * f[j];
    out[i] = acc;
  }
}

double ChebPanel::total(const double* f) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < w_.size(); ++j) acc += w_[j] * f[j];
  return acc;
}

const ChebPanel& ChebPanel::standard() {
  static const ChebPanel panel(24);
  return panel;
}

double gauss16(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 16>::integrate(f, a, b);
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tol,
                         double* error_estimate) {
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &err);
  if (error_estimate) *error_estimate = err;
  if (!std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "non-finite integral");
  if (err > 1e3 * tol * std::max(1.0, std::fabs(v)))
    fail(ErrorCode::QuadratureFailure, "error estimate " + std::to_string(err) + " above tolerance");
  return v;
}

}  // namespace billiards
