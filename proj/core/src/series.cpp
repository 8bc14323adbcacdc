#include "billiards/series.hpp"

namespace billiards {

std::vector<double> maclaurin_sin(int order) {
  std::vector<double> a(static_cast<std::size_t>(order + 1), 0.0);
  double f = 1.0;
  for (int k = 1; k <= order; ++k) {
    f /= k;
    if (k % 2 == 1) a[static_cast<std::size_t>(k)] = ((k / 2) % 2 == 0) ? f : -f;
  }
  return a;
}

std::vector<double> maclaurin_cos(int order) {
  std::vector<double> a(static_cast<std::size_t>(order + 1), 0.0);
  double f = 1.0;
  a[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    f /= k;
    if (k % 2 == 0) a[static_cast<std::size_t>(k)] = ((k / 2) % 2 == 0) ? f : -f;
  }
  return a;
}

std::vector<double> maclaurin_asin(int order) {
  std::vector<double> a(static_cast<std::size_t>(order + 1), 0.0);
  double c = 1.0;  // (2n)!/(4^n (n!)^2)
  for (int n = 0; 2 * n + 1 <= order; ++n) {
    if (n > 0) c *= (2.0 * n - 1.0) / (2.0 * n);
    a[static_cast<std::size_t>(2 * n + 1)] = c / (2.0 * n + 1.0);
  }
  return a;
}

std::vector<double> maclaurin_atan(int order) {
  std::vector<double> a(static_cast<std::size_t>(order + 1), 0.0);
  for (int n = 0; 2 * n + 1 <= order; ++n)
    a[static_cast<std::size_t>(2 * n + 1)] = (n % 2 == 0 ? 1.0 : -1.0) / (2.0 * n + 1.0);
  return a;
}

BSeries shift_expand(const DSeries& p, int outer, int inner) {
  BSeries r(outer, DSeries(inner, 0.0));
  for (int j = 0; j <= outer; ++j) {
    double binom = 1.0;  // C(i+j, j) as i grows
    for (int i = 0; i <= inner; ++i) {
      if (i > 0) binom = binom * (i + j) / i;
      int m = i + j;
      if (m <= p.order()) r[j][i] = p[m] * binom;
    }
  }
  return r;
}

}  // namespace billiards
