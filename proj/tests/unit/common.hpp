#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "billiards/billiard.hpp"
#include "billiards/curve.hpp"
#include "billiards/error.hpp"
#include "billiards/mm_series.hpp"

#define EXPECT_CODE(stmt, ec)                                                     \
  do {                                                                            \
    try {                                                                         \
      stmt;                                                                       \
      ADD_FAILURE() << "expected " << billiards::error_name(ec) << ", no throw"; \
    } catch (const billiards::Error& e) {                                         \
      EXPECT_EQ(e.code(), ec) << e.what();                                        \
    }                                                                             \
  } while (0)

namespace fixtures {

constexpr double kPi = 3.14159265358979323846;

inline const billiards::ConvexCurve& circle(double R = 1.0) {
  static std::map<double, billiards::ConvexCurve> cache;
  auto it = cache.find(R);
  if (it == cache.end()) it = cache.emplace(R, billiards::build_curve(billiards::CurveSpec::circle(R))).first;
  return it->second;
}

inline const billiards::ConvexCurve& ellipse() {
  static billiards::ConvexCurve c = billiards::build_curve(billiards::CurveSpec::ellipse(2.0, 1.0));
  return c;
}

inline const billiards::BilliardMap& ellipse_map() {
  static billiards::BilliardMap m(ellipse());
  return m;
}

/// Ellipse series by order, built once per process.
inline const billiards::InvariantSeries& ellipse_series(int order) {
  static std::map<int, billiards::InvariantSeries> cache;
  auto it = cache.find(order);
  if (it == cache.end()) {
    billiards::SeriesOptions o;
    o.order = order;
    it = cache.emplace(order, billiards::build_series(ellipse(), o)).first;
  }
  return it->second;
}

/// Ellipse parameter of the point at arc length s, read from the position.
inline double ellipse_t(double s) {
  billiards::Vec2 p = ellipse().position(s);
  return std::atan2(p.y, p.x / 2.0);
}

}  // namespace fixtures
