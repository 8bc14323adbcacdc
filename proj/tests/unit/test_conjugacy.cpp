#include "billiards/conjugacy.hpp"

#include "common.hpp"
#include "oracles.hpp"

using namespace billiards;
using fixtures::kPi;

namespace {
const LazutkinLengthReport& report(const std::string& name) {
  static std::map<std::string, LazutkinLengthReport> cache;
  if (cache.empty())
    for (auto& e : conjugacy_catalog()) cache.emplace(e.name, lazutkin_length(build_curve(e.spec)));
  return cache.at(name);
}
}  // namespace

TEST(Conjugacy, CircleLengths) {
  EXPECT_NEAR(report("circle(1)").value(), oracles::circle_lazutkin_length(1), 1e-10);
  EXPECT_NEAR(report("circle(8)").value(), oracles::circle_lazutkin_length(8), 1e-10);
}

TEST(Conjugacy, ArcAndGraphLengthsMatchQuadrature) {
  double inf = INFINITY;
  EXPECT_NEAR(report("ellipse-arc").value(), oracles::ellipse_arc_lazutkin_length(2, 1, -1, 1), 1e-8);
  double x3 = oracles::graph_lazutkin_length([](double x) { return 3 * x * x; }, [](double x) { return 6 * x; }, 1, inf);
  EXPECT_NEAR(report("x3-graph").value(), x3, 1e-6);
  double hyp = oracles::graph_lazutkin_length([](double x) { return x / std::sqrt(1 + x * x); },
                                              [](double x) { return std::pow(1 + x * x, -1.5); }, -inf, inf);
  EXPECT_NEAR(report("hyperbola").value(), hyp, 1e-6);
}

TEST(Conjugacy, ParabolaDiverges) {
  const LazutkinLengthReport& r = report("parabola");
  EXPECT_FALSE(r.finite());
  EXPECT_EQ(r.ends[0].verdict, Convergence::Divergent);
  EXPECT_EQ(r.ends[1].verdict, Convergence::Divergent);
}

TEST(Conjugacy, PowerGraphThreshold) {
  double inf = INFINITY;
  for (double r : {1.5, 2.0, 2.5, 3.0}) {
    CurveSpec sp = CurveSpec::graph("x^" + std::to_string(r), 1.0, inf);
    sp.window_min = 1.0;
    LazutkinLengthReport rep = lazutkin_length(build_curve(sp));
    EXPECT_EQ(rep.finite(), r > 2.0) << r;
  }
}

TEST(Conjugacy, CircleVerdicts) {
  ConjugacyVerdict v = classify_conjugacy(report("circle(1)"), report("circle(8)"));
  EXPECT_TRUE(v.smooth);
  EXPECT_FALSE(v.symplectic);
  EXPECT_EQ(v.trigger, Trigger::FiniteLengths);
  EXPECT_NEAR(v.alpha, 2.0, 1e-10);
  ConjugacyVerdict same = classify_conjugacy(report("circle(1)"), report("circle(1)"));
  EXPECT_TRUE(same.symplectic);
}

TEST(Conjugacy, MixedFinitenessIsNegative) {
  ConjugacyVerdict v = classify_conjugacy(report("circle(1)"), report("parabola"));
  EXPECT_FALSE(v.smooth);
  EXPECT_CODE(boundary_conjugating_map(fixtures::circle(1.0), build_curve(conjugacy_catalog()[3].spec), v),
              ErrorCode::VerdictNegative);
}

TEST(Conjugacy, BoundaryMapIsAffineInLazutkinParameter) {
  ConjugacyVerdict v = classify_conjugacy(report("circle(1)"), report("circle(8)"));
  BoundaryMap bm = boundary_conjugating_map(fixtures::circle(1.0), fixtures::circle(8.0), v);
  for (double s : {0.0, 1.0, 4.0}) EXPECT_NEAR(bm.map(s), 8.0 * s, 1e-8);
}

TEST(Conjugacy, LogCorrectedTailIsInconclusive) {
  CurveSpec sp = CurveSpec::graph("x^2*log(x)", 2.0, INFINITY);
  sp.window_min = 2.0;
  LazutkinLengthReport r = lazutkin_length(build_curve(sp));
  EXPECT_TRUE(r.inconclusive());
  EXPECT_CODE(classify_conjugacy(r, report("circle(1)")), ErrorCode::InconclusiveInput);
}
