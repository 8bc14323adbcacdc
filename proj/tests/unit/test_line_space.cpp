#include "billiards/line_space.hpp"

#include "common.hpp"

using namespace billiards;
using fixtures::kPi;

TEST(LineSpace, LineThroughContainsPoint) {
  OrientedLine L = line_through({1.0, 2.0}, {3.0, -1.0});
  EXPECT_NEAR(dot(L.normal(), Vec2{1.0, 2.0}), L.p, 1e-14);
  EXPECT_NEAR(dot(L.normal(), Vec2{4.0, 1.0}), L.p, 1e-14);
  OrientedLine R = L.reversed();
  EXPECT_NEAR(R.p, -L.p, 1e-14);
  EXPECT_NEAR(std::fabs(wrap_pi(R.phi_az - L.phi_az)), kPi, 1e-14);
}

TEST(LineSpace, ChordPassesThroughEndpoints) {
  const ConvexCurve& c = fixtures::ellipse();
  OrientedLine L = chord_to_line(c, 1.0, 2.5);
  for (double s : {1.0, 2.5}) EXPECT_NEAR(dot(L.normal(), c.position(s)), L.p, 1e-13);
  OrientedLine T = chord_to_line(c, 1.0, 1.0);
  EXPECT_NEAR(std::fabs(cross(T.direction(), c.tangent(1.0))), 0.0, 1e-12);
}

TEST(LineSpace, ChordCoordinates) {
  ChordCoordinates cc = chord_coordinates(1.0, 3.0);
  EXPECT_DOUBLE_EQ(cc.alpha, 2.0);
  EXPECT_DOUBLE_EQ(cc.psi, 1.0);
}

TEST(LineSpace, JacobianOfLinearMapIsExact) {
  PlaneMap f = [](double x, double y, double& a, double& b) {
    a = 2 * x + 3 * y;
    b = -x + 0.5 * y;
  };
  Jacobian2 J = numeric_jacobian(f, 0.3, -0.7, 1e-3, 1e-3);
  EXPECT_NEAR(J.a, 2.0, 1e-10);
  EXPECT_NEAR(J.b, 3.0, 1e-10);
  EXPECT_NEAR(J.c, -1.0, 1e-10);
  EXPECT_NEAR(J.det(), 4.0, 1e-10);
}

TEST(LineSpace, ReflectionPreservesAreaInLineChart) {
  BilliardMap m(fixtures::ellipse());
  std::vector<OrientedLine> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(m.line_of_phase(0.7 * i, 0.2 + 0.2 * (i % 5)));
  LineMap F = [&](const OrientedLine& L) { return m.reflect_line(L); };
  EXPECT_LT(symplectic_area_defect(F, samples), 1e-6);
}
