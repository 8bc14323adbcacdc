#include "billiards/fit.hpp"

#include <algorithm>
#include <cmath>

#include "billiards/error.hpp"

namespace billiards {

PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  const std::size_t m = x.size(), n = static_cast<std::size_t>(degree + 1);
  if (y.size() != m || m < n) fail(ErrorCode::Validation, "polyfit needs at least degree+1 points");
  double xs = 0.0;
  for (double v : x) xs = std::max(xs, std::fabs(v));
  if (xs == 0.0) xs = 1.0;
  // Column-major design matrix in u = x / xs.
  std::vector<std::vector<double>> A(n, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      A[j][i] = p;
      p *= x[i] / xs;
    }
  }
  std::vector<double> b = y;
  // Householder QR.
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < m; ++i) nrm += A[k][i] * A[k][i];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) fail(ErrorCode::IllConditioned, "rank-deficient fit");
    double alpha = A[k][k] > 0 ? -nrm : nrm;
    std::vector<double> v(m, 0.0);
    for (std::size_t i = k; i < m; ++i) v[i] = A[k][i];
    v[k] -= alpha;
    double vn = 0.0;
    for (std::size_t i = k; i < m; ++i) vn += v[i] * v[i];
    if (vn == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = k; i < m; ++i) d += v[i] * A[j][i];
      d = 2.0 * d / vn;
      for (std::size_t i = k; i < m; ++i) A[j][i] -= d * v[i];
    }
    double d = 0.0;
    for (std::size_t i = k; i < m; ++i) d += v[i] * b[i];
    d = 2.0 * d / vn;
    for (std::size_t i = k; i < m; ++i) b[i] -= d * v[i];
  }
  PolyFit out;
  out.coeffs.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= A[j][k] * out.coeffs[j];
    out.coeffs[k] = acc / A[k][k];
  }
  double ss = 0.0;
  for (std::size_t i = n; i < m; ++i) ss += b[i] * b[i];
  out.rms = std::sqrt(ss / m);
  double sc = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.coeffs[j] /= sc;
    sc *= xs;
  }
  return out;
}

LineFit linefit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::Validation, "line fit needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return f;
}

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  return linefit(lx, ly);
}

}  // namespace billiards
