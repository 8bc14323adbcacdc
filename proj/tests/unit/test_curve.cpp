#include <boost/math/special_functions/ellint_2.hpp>

#include "common.hpp"
#include "oracles.hpp"

using namespace billiards;
using fixtures::kPi;

TEST(Curve, CircleLengthAndCurvature) {
  const ConvexCurve& c = fixtures::circle(3.0);
  EXPECT_NEAR(c.length(), 6.0 * kPi, 1e-12);
  for (double s : {0.0, 1.0, 7.5, 18.0}) {
    EXPECT_NEAR(c.curvature(s), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(norm(c.position(s)), 3.0, 1e-12);
  }
  EXPECT_TRUE(c.closed());
  EXPECT_EQ(c.end_behavior(0).kind, EndKind::Periodic);
}

TEST(Curve, EllipseLengthMatchesCompleteEllipticIntegral) {
  double k = std::sqrt(1.0 - 0.25);
  EXPECT_NEAR(fixtures::ellipse().length(), 8.0 * boost::math::ellint_2(k), 1e-10);
}

TEST(Curve, EllipseCurvatureMatchesClosedForm) {
  const ConvexCurve& c = fixtures::ellipse();
  for (int i = 0; i < 17; ++i) {
    double s = c.length() * i / 17.0, t = fixtures::ellipse_t(s);
    EXPECT_NEAR(c.curvature(s), oracles::ellipse_curvature(2, 1, t), 1e-10);
    EXPECT_NEAR(c.curvature_derivative(s), oracles::ellipse_curvature_ds(2, 1, t), 1e-8);
  }
}

TEST(Curve, FrenetPropertyOnRandomPoints) {
  std::mt19937_64 rng(7);
  for (const ConvexCurve* c : {&fixtures::ellipse(), &fixtures::circle(2.0)}) {
    std::uniform_real_distribution<double> u(0.0, c->length());
    for (int i = 0; i < 40; ++i) {
      double s = u(rng), e = 1e-5;
      EXPECT_NEAR(norm(c->tangent(s)), 1.0, 1e-12);
      Vec2 dT = (1.0 / (2 * e)) * (c->tangent(s + e) - c->tangent(s - e));
      EXPECT_NEAR(dT.x, c->curvature(s) * c->normal(s).x, 1e-7);
      EXPECT_NEAR(dT.y, c->curvature(s) * c->normal(s).y, 1e-7);
      Vec2 dP = (1.0 / (2 * e)) * (c->position(s + e) - c->position(s - e));
      EXPECT_NEAR(dP.x, c->tangent(s).x, 1e-9);
    }
  }
}

TEST(Curve, GraphCurvature) {
  ConvexCurve c = build_curve(CurveSpec::graph("x^2", -1.0, 2.0));
  for (int i = 0; i <= 10; ++i) {
    double s = c.length() * i / 10.0;
    double x = c.position(s).x;
    EXPECT_NEAR(c.position(s).y, x * x, 1e-10);
    EXPECT_NEAR(c.curvature(s), 2.0 / std::pow(1.0 + 4.0 * x * x, 1.5), 1e-9);
  }
  EXPECT_FALSE(c.closed());
  EXPECT_EQ(c.end_behavior(0).kind, EndKind::FiniteEndpoint);
}

TEST(Curve, EndBehaviour) {
  double inf = INFINITY;
  ConvexCurve par = build_curve(CurveSpec::graph("x^2", -inf, inf));
  EXPECT_EQ(par.end_behavior(0).kind, EndKind::UnboundedNoAsymptote);
  EXPECT_EQ(par.end_behavior(1).kind, EndKind::UnboundedNoAsymptote);
  ConvexCurve hyp = build_curve(CurveSpec::graph("sqrt(1+x^2)", -inf, inf));
  EXPECT_EQ(hyp.end_behavior(1).kind, EndKind::AsymptoticLine);
  EXPECT_NEAR(std::fabs(hyp.end_behavior(1).direction.x), std::sqrt(0.5), 1e-6);
}

TEST(Curve, NonConvexRejected) {
  EXPECT_CODE(build_curve(CurveSpec::graph("x^3", -1.0, 1.0)), ErrorCode::NonConvex);
  EXPECT_CODE(build_curve(CurveSpec::circle(-1.0)), ErrorCode::DegenerateSpec);
}

TEST(Curve, SampledCircleApproximatesCurvature) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 400; ++i) pts.push_back({std::cos(2 * kPi * i / 400), std::sin(2 * kPi * i / 400)});
  ConvexCurve c = build_curve(CurveSpec::sampled(pts, true));
  EXPECT_NEAR(c.length(), 2 * kPi, 1e-4);
  for (double s : {0.3, 2.0, 5.0}) EXPECT_NEAR(c.curvature(s), 1.0, 1e-3);
}

TEST(Curve, ReduceWrapsClosedCurves) {
  const ConvexCurve& c = fixtures::circle(1.0);
  EXPECT_NEAR(c.reduce(2 * kPi + 0.25), 0.25, 1e-12);
  EXPECT_NEAR(c.reduce(-0.25), 2 * kPi - 0.25, 1e-12);
}
