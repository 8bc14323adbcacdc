#pragma once

#include <vector>

namespace billiards {

struct PolyFit {
  std::vector<double> coeffs;  ///< ascending powers
  double rms = 0.0;
};

/// Least-squares polynomial fit of the given degree (QR via Householder on a scaled basis).
PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

struct LineFit {
  double slope = 0.0, intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit linefit(const std::vector<double>& x, const std::vector<double>& y);

/// Fit log y against log x; zero or negative y values are dropped.
LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace billiards
