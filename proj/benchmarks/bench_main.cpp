#include <benchmark/benchmark.h>

#include "billiards/billiard.hpp"
#include "billiards/caustics.hpp"
#include "billiards/conjugacy.hpp"
#include "billiards/curve.hpp"
#include "billiards/mm_series.hpp"

using namespace billiards;

namespace {

const ConvexCurve& ellipse() {
  static ConvexCurve c = build_curve(CurveSpec::ellipse(2.0, 1.0));
  return c;
}

const BilliardMap& ellipse_map() {
  static BilliardMap m(ellipse());
  return m;
}

const InvariantSeries& ellipse_series() {
  static InvariantSeries s = build_series(ellipse(), {});
  return s;
}

void BM_BilliardStep(benchmark::State& state) {
  const auto& map = ellipse_map();
  double y = 1.0 / static_cast<double>(state.range(0));
  double s = 0.3;
  for (auto _ : state) {
    double s2, y2;
    map.step_sy(s, y, s2, y2);
    benchmark::DoNotOptimize(s2);
    s = s2 - map.curve().length() * std::floor(s2 / map.curve().length());
  }
}
BENCHMARK(BM_BilliardStep)->Arg(10)->Arg(1000)->Arg(100000);

void BM_SeriesBuild(benchmark::State& state) {
  SeriesOptions o;
  o.order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_series(ellipse(), o));
}
BENCHMARK(BM_SeriesBuild)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Envelope(benchmark::State& state) {
  double L = ellipse().length();
  LineFamily fam = base_leaf(ellipse_map(), ellipse_series(), 3, 1e-3, 0.2 * L, 1.2 * L, true);
  int samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(envelope_of_family(fam, samples));
}
BENCHMARK(BM_Envelope)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_LazutkinLength(benchmark::State& state) {
  ConvexCurve graph = build_curve(CurveSpec::graph("x^3", 1.0, INFINITY));
  for (auto _ : state) benchmark::DoNotOptimize(lazutkin_length(graph));
}
BENCHMARK(BM_LazutkinLength)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
