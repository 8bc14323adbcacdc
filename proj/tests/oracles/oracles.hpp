#pragma once

// Closed-form and brute-force references for the test suite.
// Nothing here includes the library headers: expectations must not come from the code under test.

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracles {

struct CircleStep {
  double s, phi;
};

/// Exact billiard step in a circle of radius R: the inscribed angle gives an arc of 2 R phi.
CircleStep circle_step(double R, double s, double phi);
/// Radius of the circle tangent to all chords with angle phi.
double circle_caustic_radius(double R, double phi);
/// Lazutkin parameter s (2 sqrt2 R)^{-2/3}.
double circle_lazutkin_parameter(double R, double s);
/// Integral of kappa^{2/3} over the circle, 2 pi R^{1/3}.
double circle_lazutkin_length(double R);

struct NoRealTangency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Confocal parameter of the conic x^2/(a^2-l) + y^2/(b^2-l) = 1 tangent to the line through two points.
/// For a unit normal n and offset p the tangency condition reads p^2 = (a^2-l) n_x^2 + (b^2-l) n_y^2.
double ellipse_conserved(double a, double b, double x1, double y1, double x2, double y2);

/// Confocal parameter l < b^2 of the ellipse x^2/(a^2-l) + y^2/(b^2-l) = 1 through (x, y): smaller root of
/// l^2 - (a^2 + b^2 - x^2 - y^2) l + a^2 b^2 - b^2 x^2 - a^2 y^2 = 0.
double ellipse_point_confocal(double a, double b, double x, double y);

/// Ellipse x = a cos t, y = b sin t: curvature and its arc-length derivative.
double ellipse_curvature(double a, double b, double t);
double ellipse_curvature_ds(double a, double b, double t);

/// Curvature of a graph from f' and f''.
double graph_curvature(double fp, double fpp);

/// Lazutkin length of a graph y = f(x) over [x0, x1] (either end may be infinite):
/// the integral of |f''|^{2/3} / sqrt(1 + f'^2) dx by double-exponential quadrature.
double graph_lazutkin_length(const std::function<double(double)>& fp, const std::function<double(double)>& fpp,
                             double x0, double x1);
/// Lazutkin length of the ellipse arc t in [t0, t1]: integral of (ab)^{2/3} / sqrt(a^2 sin^2 t + b^2 cos^2 t) dt.
double ellipse_arc_lazutkin_length(double a, double b, double t0, double t1);

using Field = std::function<double(double, double)>;
using Step = std::function<void(double, double, double&, double&)>;

/// max |g(F x) - g(x)| over every grid point, with no shortcuts.
double bruteforce_invariance(const Field& g, const Step& step, const std::vector<std::pair<double, double>>& grid);

/// Dense tensor grid in (tau, h).
std::vector<std::pair<double, double>> tensor_grid(double t0, double t1, int nt, double h0, double h1, int nh);

}  // namespace oracles
