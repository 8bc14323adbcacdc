#pragma once

#include <functional>
#include <vector>

namespace billiards {

/// Chebyshev-Lobatto panel of degree n on [-1, 1] with a spectral
/// antiderivative matrix.  Node j sits at x_j = -cos(pi j / n) (increasing).
class ChebPanel {
 public:
  explicit ChebPanel(int n);
  int size() const { return n_ + 1; }
  double node(int j) const { return x_[static_cast<std::size_t>(j)]; }
  /// Antiderivative from -1 evaluated at every node (unit half-width).
  void cumulative(const double* f, double* out) const;
  /// Integral over [-1, 1].
  double total(const double* f) const;

  static const ChebPanel& standard();

 private:
  int n_;
  std::vector<double> x_, s_, w_;
};

/// Fixed 16-point Gauss-Legendre rule on [a, b].
double gauss16(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Kronrod on [a, b]; throws QuadratureFailure if the error estimate stays above tol.
double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tol,
                         double* error_estimate = nullptr);

}  // namespace billiards
