#include "common.hpp"
#include "oracles.hpp"

#include "billiards/fit.hpp"

using namespace billiards;
using fixtures::kPi;

TEST(Series, CircleCoefficientsAreConstant) {
  SeriesOptions o;
  o.order = 4;
  InvariantSeries ser = build_series(fixtures::circle(1.0), o);
  for (int k = 1; k <= 4; ++k) {
    double ref = ser.h(k, ser.grid().front());
    for (double s : ser.grid()) EXPECT_NEAR(ser.h(k, s), ref, 1e-6 * std::fabs(ref) + 1e-300) << k;
  }
}

TEST(Series, OrderAboveBoundRejected) {
  SeriesOptions o;
  o.order = 13;
  EXPECT_CODE(build_series(fixtures::circle(1.0), o), ErrorCode::OrderTooHigh);
}

TEST(Series, JetRowsMatchTwistCoefficient) {
  const ConvexCurve& c = fixtures::ellipse();
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(c.length() * i / 9.0);
  JetTable J = compute_jets(c, grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = fixtures::ellipse_t(grid[i]);
    double w = 2.0 * std::sqrt(2.0) / oracles::ellipse_curvature(2, 1, t);
    EXPECT_NEAR(J.F1[i][0], grid[i], 1e-12);
    EXPECT_NEAR(J.F2[i][0], 0.0, 1e-14);
    EXPECT_NEAR(J.F1[i][1], w, 1e-9 * w);
    EXPECT_NEAR(J.F2[i][1], 1.0, 1e-12);
  }
}

TEST(Series, SecondComponentObeysAreaConstraint) {
  const ConvexCurve& c = fixtures::ellipse();
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(c.length() * (i + 0.5) / 12.0);
  JetTable J = compute_jets(c, grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = fixtures::ellipse_t(grid[i]);
    double k = oracles::ellipse_curvature(2, 1, t), kp = oracles::ellipse_curvature_ds(2, 1, t);
    double wprime = -2.0 * std::sqrt(2.0) * kp / (k * k);
    double q = 2.0 * J.F2[i][2];
    EXPECT_NEAR(q, -2.0 / 3.0 * wprime, 1e-8);
  }
}

TEST(Series, TaylorAndDifferenceJetsAgree) {
  const BilliardMap& m = fixtures::ellipse_map();
  std::vector<double> grid{0.5, 2.0, 4.1};
  JetTable A = compute_jets(m.curve(), grid, 3);
  JetTable B = compute_jets_fd(m, grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int k = 1; k <= 3; ++k) {
      EXPECT_NEAR(A.F1[i][k], B.F1[i][k], 1e-4 * (1 + std::fabs(A.F1[i][k])));
      EXPECT_NEAR(A.F2[i][k], B.F2[i][k], 1e-4 * (1 + std::fabs(A.F2[i][k])));
    }
}

TEST(Series, HomogeneousOdeHasPowerSolution) {
  std::vector<double> s, w, b;
  for (int i = 0; i <= 400; ++i) {
    s.push_back(0.01 * i);
    w.push_back(1.0 + 0.2 * std::sin(s.back()));
    b.push_back(0.0);
  }
  OdeSolution sol = solve_coefficient_ode(2, s, w, b, 0.7);
  for (std::size_t i = 0; i < s.size(); i += 40) EXPECT_NEAR(sol.g[i], 0.7 * std::pow(w[i], 4.0 / 3.0), 1e-10);
}

TEST(Series, StencilDerivative) {
  std::vector<double> f;
  double h = 0.01;
  for (int i = 0; i <= 300; ++i) f.push_back(std::sin(i * h));
  std::vector<double> d = stencil_derivative(f, h);
  for (int i = 0; i <= 300; i += 10) EXPECT_NEAR(d[static_cast<std::size_t>(i)], std::cos(i * h), 1e-9);
}

TEST(Series, SymmetrizedSeriesIsEvenInZ) {
  const InvariantSeries& ser = fixtures::ellipse_series(3);
  std::vector<double> tz = ser.t_z_coefficients(1.0);
  for (std::size_t j = 1; j < tz.size(); j += 2) EXPECT_EQ(tz[j], 0.0);
  EXPECT_LT(ser.symmetry_defect(), 1e-8);
  EXPECT_LT(ser.ode_residual(), 1e-8);
}

TEST(Series, DefectDecaysFasterThanOrder) {
  const InvariantSeries& ser = fixtures::ellipse_series(3);
  std::vector<double> probes;
  for (int i = 0; i < 12; ++i) probes.push_back(ser.s_begin() + 0.1 * (ser.s_end() - ser.s_begin()) + 0.4 * i);
  for (int n = 1; n <= 3; ++n) {
    std::vector<double> ys, ds;
    for (int i = 0; i < 8; ++i) {
      ys.push_back(1e-4 * std::pow(100.0, i / 7.0));
      ds.push_back(invariance_defect(ser, fixtures::ellipse_map(), n, ys.back(), probes));
    }
    EXPECT_GE(loglog_fit(ys, ds).slope, n + 0.7) << n;
  }
}

TEST(Series, LevelAdvanceTracksSquareRoot) {
  const InvariantSeries& ser = fixtures::ellipse_series(3);
  double a1 = level_advance(ser, fixtures::ellipse_map(), 3, 2.0, 1e-4);
  double a2 = level_advance(ser, fixtures::ellipse_map(), 3, 2.0, 4e-4);
  EXPECT_NEAR(a2 / a1, 2.0, 0.05);
}
