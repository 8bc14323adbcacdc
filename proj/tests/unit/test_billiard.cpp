#include "billiards/line_space.hpp"

#include "common.hpp"
#include "oracles.hpp"

using namespace billiards;
using fixtures::kPi;

TEST(Billiard, CircleStepMatchesInscribedAngle) {
  const double R = 2.0;
  BilliardMap m(fixtures::circle(R));
  for (double phi : {1e-3, 0.1, kPi / 6, 1.2, 2.0, 3.0}) {
    Hit h = m.second_intersection(0.5, phi);
    oracles::CircleStep ref = oracles::circle_step(R, 0.5, phi);
    // Backward-leaning chords are reported behind the footpoint.
    double expect = phi > kPi / 2 ? ref.s - 2 * kPi * R : ref.s;
    EXPECT_NEAR(h.s, expect, 1e-12) << phi;
    EXPECT_NEAR(h.phi, ref.phi, 1e-12);
  }
}

TEST(Billiard, StepBackInvertsStep) {
  const BilliardMap& m = fixtures::ellipse_map();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> us(0.0, m.curve().length()), up(0.01, 3.1);
  for (int i = 0; i < 50; ++i) {
    PhasePoint p{Chart::SPhi, us(rng), up(rng)};
    PhasePoint q = m.step_back(m.step(p));
    EXPECT_NEAR(m.curve().reduce(q.c1), p.c1, 1e-10);
    EXPECT_NEAR(q.c2, p.c2, 1e-11);
  }
}

TEST(Billiard, StepFactorsThroughInvolutions) {
  const BilliardMap& m = fixtures::ellipse_map();
  for (double s : {0.1, 2.0, 5.0}) {
    for (double phi : {0.05, 0.7, 2.5}) {
      PhasePoint p{Chart::SPhi, s, phi};
      PhasePoint b = m.involution_beta(p);
      PhasePoint bb = m.involution_beta(b);
      EXPECT_NEAR(m.curve().reduce(bb.c1), s, 1e-10);
      EXPECT_NEAR(bb.c2, phi, 1e-11);
      PhasePoint f = BilliardMap::involution_I(b), g = m.step(p);
      EXPECT_NEAR(f.c1, g.c1, 1e-12);
      EXPECT_NEAR(f.c2, g.c2, 1e-12);
    }
  }
}

TEST(Billiard, LinesAndPhasePointsAgree) {
  const BilliardMap& m = fixtures::ellipse_map();
  for (double s : {0.3, 3.0, 8.0}) {
    for (double phi : {0.02, 0.9, 2.2}) {
      OrientedLine L = m.line_of_phase(s, phi);
      PhasePoint q = m.phase_of_line(L);
      EXPECT_NEAR(q.c1, s, 1e-10);
      EXPECT_NEAR(q.c2, phi, 1e-10);
      PhasePoint n = m.step({Chart::SPhi, s, phi});
      OrientedLine R = m.reflect_line(L), E = m.line_of_phase(m.curve().reduce(n.c1), n.c2);
      EXPECT_NEAR(std::fabs(wrap_pi(R.phi_az - E.phi_az)), 0.0, 1e-9);
      EXPECT_NEAR(R.p, E.p, 1e-9);
    }
  }
}

TEST(Billiard, ShortChordsAreFound) {
  const BilliardMap& m = fixtures::ellipse_map();
  // Near the vertex of largest curvature a shallow chord spans less than one scan cell.
  double s = m.curve().length() / 2;
  OrientedLine L = m.line_of_phase(s, 2e-3);
  EXPECT_EQ(m.line_crossings(L).size(), 2u);
  EXPECT_NEAR(m.phase_of_line(L).c2, 2e-3, 1e-9);
}

TEST(Billiard, ConfocalParameterSurvivesReflection) {
  const BilliardMap& m = fixtures::ellipse_map();
  const ConvexCurve& c = m.curve();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(0.0, c.length()), up(0.05, 3.0);
  for (int i = 0; i < 30; ++i) {
    PhasePoint p{Chart::SPhi, us(rng), up(rng)};
    PhasePoint q = m.step(p), r = m.step(q);
    Vec2 a = c.position(p.c1), b = c.position(q.c1), d = c.position(r.c1);
    try {
      double l1 = oracles::ellipse_conserved(2, 1, a.x, a.y, b.x, b.y);
      double l2 = oracles::ellipse_conserved(2, 1, b.x, b.y, d.x, d.y);
      EXPECT_NEAR(l1, l2, 1e-10);
    } catch (const oracles::NoRealTangency&) {
    }
  }
}

TEST(Billiard, CircleOrbitKeepsAngle) {
  BilliardMap m(fixtures::circle(1.0));
  Orbit o = orbit(m, {Chart::SY, 0.0, 0.02}, 100);
  ASSERT_EQ(o.steps.size(), 101u);
  for (const auto& st : o.steps) EXPECT_NEAR(st.y, 0.02, 1e-13);
  EXPECT_FALSE(o.escaped);
}

TEST(Billiard, OpenArcOrbitEscapes) {
  BilliardMap m(build_curve(CurveSpec::graph("x^2", -1.0, 1.0)));
  Orbit o = orbit(m, {Chart::SY, 0.1, 1e-3}, 100000);
  EXPECT_TRUE(o.escaped);
  EXPECT_EQ(o.stop_reason, "escape");
  EXPECT_GT(o.steps.size(), 10u);
}

TEST(Billiard, AngleOutsideRangeRejected) {
  const BilliardMap& m = fixtures::ellipse_map();
  EXPECT_CODE(m.second_intersection(0.0, 0.0), ErrorCode::MapUndefined);
  EXPECT_CODE(m.second_intersection(0.0, 3.5), ErrorCode::MapUndefined);
}

TEST(Billiard, ChartConversionsRoundTrip) {
  for (double phi : {1e-4, 0.3, 1.5, 3.0}) {
    PhasePoint p{Chart::SPhi, 1.0, phi};
    for (Chart c : {Chart::SY, Chart::SZ}) {
      PhasePoint q = convert_chart(convert_chart(p, c), Chart::SPhi);
      EXPECT_NEAR(q.c2, phi, 1e-13 * (1 + phi));
    }
    EXPECT_NEAR(y_of_phi(phi), 1.0 - std::cos(phi), 1e-15);
  }
}

TEST(Billiard, LongOrbitsKeepWrapping) {
  // footpoints are unwrapped, so after many turns s is far outside the base period
  const BilliardMap& m = fixtures::ellipse_map();
  Orbit o = orbit(m, {Chart::SY, 0.3, 1e-3}, 3000);
  ASSERT_EQ(o.steps.size(), 3001u);
  EXPECT_GT(o.steps.back().s, 20 * m.curve().length());
  double l0 = oracles::ellipse_conserved(2, 1, o.steps[0].pos.x, o.steps[0].pos.y, o.steps[1].pos.x, o.steps[1].pos.y);
  const auto& a = o.steps[2999];
  const auto& b = o.steps[3000];
  EXPECT_NEAR(oracles::ellipse_conserved(2, 1, a.pos.x, a.pos.y, b.pos.x, b.pos.y), l0, 1e-9);
}

TEST(Billiard, SmallAngleStepsConvergeEverywhere) {
  const BilliardMap& m = fixtures::ellipse_map();
  double L = m.curve().length();
  int failures = 0;
  for (double y : {1e-5, 1e-7, 1e-9})
    for (int i = 0; i < 3000; ++i) {
      double s2, y2;
      try {
        m.step_sy(L * i / 3000.0, y, s2, y2);
      } catch (const Error&) {
        ++failures;
      }
    }
  EXPECT_EQ(failures, 0);
}
