#include "billiards/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "billiards/error.hpp"
#include "billiards/fit.hpp"
#include "billiards/normal_form.hpp"

namespace billiards {

namespace {
double density(const CurveSource& src, double u) {
  Vec2 p, d1, d2;
  src.eval(u, p, d1, d2);
  double v2 = dot(d1, d1), v = std::sqrt(v2);
  double k = cross(d1, d2) / (v2 * v);
  return std::cbrt(k * k) * v;
}

double integrate(const CurveSource& src, double a, double b) {
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) { return density(src, u); }, a, b, 12, 1e-13, &err);
  if (!std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "non-finite Lazutkin density");
  return v;
}

EndReport tail_report(const ConvexCurve& curve, int end) {
  EndReport r;
  const CurveSource& src = curve.source();
  const EndBehavior& eb = curve.end_behavior(end);
  double sign = end == 1 ? 1.0 : -1.0;
  double A = end == 1 ? src.u_max : src.u_min;

  // Segments doubling in |u|; record mean density for the tail fit.
  std::vector<double> xs, ds;
  double acc = 0.0, last_density = 0.0, last_x = 0.0;
  for (int k = 0; k < 40 && std::fabs(A) < 1e12; ++k) {
    double B = A + sign * std::max(1.0, std::fabs(A));
    double v = integrate(src, std::min(A, B), std::max(A, B));
    double mid = std::sqrt(std::max(std::fabs(A), 1.0) * std::fabs(B));
    double dens = v / std::fabs(B - A);
    // Stop where cancellation in the curvature takes over.
    if (!(dens > 0.0) || !(density(src, B) > 0.0)) break;
    if (xs.size() >= 3) {
      std::size_t n = xs.size();
      double s1 = std::log(ds[n - 1] / ds[n - 2]) / std::log(xs[n - 1] / xs[n - 2]);
      double s0 = std::log(ds[n - 2] / ds[n - 3]) / std::log(xs[n - 2] / xs[n - 3]);
      double s2 = std::log(dens / ds[n - 1]) / std::log(mid / xs[n - 1]);
      if (n >= 6 && std::fabs(s2 - s1) > 10.0 * std::fabs(s1 - s0) + 1e-3) break;
    }
    acc += v;
    xs.push_back(mid);
    ds.push_back(dens);
    last_density = density(src, B);
    last_x = std::fabs(B);
    A = B;
  }
  if (xs.size() < 4) fail(ErrorCode::QuadratureFailure, "tail density unusable");
  std::size_t m = std::min<std::size_t>(8, xs.size());
  std::vector<double> fx(xs.end() - static_cast<long>(m), xs.end()), fd(ds.end() - static_cast<long>(m), ds.end());
  LineFit lf = loglog_fit(fx, fd);
  r.nu = lf.slope;
  r.nu_stderr = lf.slope_stderr;
  auto extrapolated = [&]() { return acc + (r.nu < -1.0 ? last_density * last_x / (-r.nu - 1.0) : 0.0); };

  if (eb.kind == EndKind::AsymptoticLine) {
    r.verdict = Convergence::Convergent;
    r.method = "end-behavior rule (asymptotic line)";
    r.tail = extrapolated();
    return r;
  }
  // Graph y = x^r: clean power fit of |f| at large |x|.
  if (curve.spec().kind == CurveSpec::Kind::Graph) {
    std::vector<double> gx, gy;
    bool ok = true;
    for (int k = 0; k <= 12; ++k) {
      double x = std::pow(10.0, 3.0 + 0.25 * k);
      Vec2 p, d1, d2;
      src.eval(sign * x, p, d1, d2);
      if (!(std::fabs(p.y) > 0.0) || !std::isfinite(p.y)) ok = false;
      gx.push_back(x);
      gy.push_back(std::fabs(p.y));
    }
    if (ok) {
      LineFit pf = loglog_fit(gx, gy);
      double dev = 0.0;
      for (std::size_t i = 0; i < gx.size(); ++i)
        dev = std::max(dev, std::fabs(std::log(gy[i]) - (pf.intercept + pf.slope * std::log(gx[i]))));
      if (dev < 1e-6 && pf.slope > 1.0) {
        r.r = pf.slope;
        if (std::fabs(r.r - 2.0) > 1e-6) {
          r.verdict = r.r > 2.0 ? Convergence::Convergent : Convergence::Divergent;
        } else {
          r.verdict = Convergence::Divergent;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "end-behavior rule (y = x^r, r = %.6g)", r.r);
        r.method = buf;
        if (r.verdict == Convergence::Convergent) r.tail = extrapolated();
        return r;
      }
    }
  }
  r.method = "tail power-law extrapolation";
  double band = std::max(3.0 * r.nu_stderr, 1e-3);
  if (r.nu >= -1.0 - band) {
    r.verdict = Convergence::Divergent;
  } else if (r.nu < -1.0 - std::max(3.0 * r.nu_stderr, 0.02)) {
    r.verdict = Convergence::Convergent;
    r.tail = extrapolated();
  } else {
    r.verdict = Convergence::Inconclusive;
  }
  return r;
}
}  // namespace

const char* convergence_name(Convergence c) {
  switch (c) {
    case Convergence::Convergent: return "convergent";
    case Convergence::Divergent: return "divergent";
    case Convergence::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* trigger_name(Trigger t) {
  switch (t) {
    case Trigger::None: return "neither";
    case Trigger::FiniteLengths: return "i";
    case Trigger::InfiniteMatching: return "ii";
  }
  return "?";
}

bool LazutkinLengthReport::finite() const {
  return ends[0].verdict == Convergence::Convergent && ends[1].verdict == Convergence::Convergent;
}

bool LazutkinLengthReport::inconclusive() const {
  return ends[0].verdict == Convergence::Inconclusive || ends[1].verdict == Convergence::Inconclusive;
}

double LazutkinLengthReport::value() const { return window + ends[0].tail + ends[1].tail; }

LazutkinLengthReport lazutkin_length(const ConvexCurve& curve) {
  LazutkinLengthReport r;
  const CurveSource& src = curve.source();
  r.closed = curve.closed();
  const int panels = 64;
  for (int i = 0; i < panels; ++i) {
    double a = src.u_min + (src.u_max - src.u_min) * i / panels;
    double b = src.u_min + (src.u_max - src.u_min) * (i + 1) / panels;
    r.window += integrate(src, a, b);
  }
  for (int e = 0; e < 2; ++e) {
    if (curve.unbounded(e)) {
      r.ends[e] = tail_report(curve, e);
    } else {
      r.ends[e].verdict = Convergence::Convergent;
      r.ends[e].method = "closed-window quadrature";
    }
  }
  return r;
}

double lazutkin_length_between(const ConvexCurve& curve, double s_a, double s_b) {
  if (!curve.in_domain(s_a) || !curve.in_domain(s_b)) fail(ErrorCode::OutOfDomain, "arc outside the window");
  const CurveSource& src = curve.source();
  double ua = curve.param_of(s_a), ub = curve.param_of(s_b);
  int panels = std::max(1, static_cast<int>(std::ceil(64.0 * std::fabs(ub - ua) / (src.u_max - src.u_min))));
  double acc = 0.0;
  for (int i = 0; i < panels; ++i)
    acc += integrate(src, ua + (ub - ua) * i / panels, ua + (ub - ua) * (i + 1) / panels);
  return acc;
}

ConjugacyVerdict classify_conjugacy(const LazutkinLengthReport& a, const LazutkinLengthReport& b, double equal_tol) {
  if (a.inconclusive() || b.inconclusive())
    fail(ErrorCode::InconclusiveInput, "a Lazutkin length verdict is inconclusive");
  ConjugacyVerdict v;
  bool fa = a.finite(), fb = b.finite();
  auto infinite = [](const LazutkinLengthReport& r, int e) { return r.ends[e].verdict == Convergence::Divergent; };
  if (fa && fb) {
    v.smooth = true;
    v.trigger = Trigger::FiniteLengths;
    double La = a.value(), Lb = b.value();
    v.alpha = Lb / La;
    v.symplectic = std::fabs(Lb - La) <= equal_tol * std::max(La, Lb);
    v.reason = v.symplectic ? "both Lazutkin lengths finite and equal" : "both Lazutkin lengths finite, not equal";
  } else if (!fa && !fb) {
    bool both_a = infinite(a, 0) && infinite(a, 1), both_b = infinite(b, 0) && infinite(b, 1);
    bool same_one = !both_a && !both_b && infinite(a, 0) == infinite(b, 0) && infinite(a, 1) == infinite(b, 1);
    if ((both_a && both_b) || same_one) {
      v.smooth = true;
      v.symplectic = true;
      v.trigger = Trigger::InfiniteMatching;
      v.reason = both_a ? "both lengths infinite in both directions" : "both lengths infinite in the same single direction";
    } else {
      v.reason = "both lengths infinite with different divergence directions";
    }
  } else {
    v.reason = "one Lazutkin length finite, the other infinite";
  }
  return v;
}

ConjugacyVerdict classify_conjugacy(const ConvexCurve& a, const ConvexCurve& b) {
  return classify_conjugacy(lazutkin_length(a), lazutkin_length(b));
}

BoundaryMap boundary_conjugating_map(const ConvexCurve& a, const ConvexCurve& b, const ConjugacyVerdict& v) {
  if (!v.smooth) fail(ErrorCode::VerdictNegative, "curves are not conjugate; no boundary map");
  auto la = std::make_shared<LazutkinChart>(a, 0.0);
  auto lb = std::make_shared<LazutkinChart>(b, 0.0);
  BoundaryMap m;
  m.alpha = v.alpha;
  m.beta = v.beta;
  double alpha = m.alpha, beta = m.beta;
  m.map = [la, lb, alpha, beta](double s) { return lb->s_of_t(alpha * la->t(s) + beta); };
  return m;
}

std::vector<CatalogEntry> conjugacy_catalog() {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<CatalogEntry> c;
  c.push_back({"circle(1)", CurveSpec::circle(1.0)});
  c.push_back({"circle(8)", CurveSpec::circle(8.0)});
  c.push_back({"ellipse-arc", CurveSpec::ellipse_arc(2.0, 1.0, -1.0, 1.0)});
  c.push_back({"parabola", CurveSpec::graph("x^2", -inf, inf)});
  c.push_back({"x3-graph", CurveSpec::graph("x^3", 1.0, inf)});
  c.push_back({"hyperbola", CurveSpec::graph("sqrt(1+x^2)", -inf, inf)});
  c[4].spec.window_min = 1.0;
  return c;
}

}  // namespace billiards
