#include "billiards/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/quadrature.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinCurvature = 1e-12;

double fmt_inf(double v) { return v; }

class CircleSource final : public CurveSource {
 public:
  explicit CircleSource(double r) : r_(r) {
    u_min = 0.0;
    u_max = kTwoPi;
    periodic = true;
  }
  void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
    double c = std::cos(u), s = std::sin(u);
    p = {r_ * c, r_ * s};
    d1 = {-r_ * s, r_ * c};
    d2 = {-r_ * c, -r_ * s};
  }
  Vec2 eval3(double u) const override { return {r_ * std::sin(u), -r_ * std::cos(u)}; }
  void taylor(double u, int order, DSeries& x, DSeries& y) const override {
    DSeries t = DSeries::variable(u, order), s, c;
    series_sincos(t, s, c);
    x = c * r_;
    y = s * r_;
  }
  double r_;
};

class EllipseSource final : public CurveSource {
 public:
  EllipseSource(double a, double b, double t0, double t1, bool closed) : a_(a), b_(b) {
    u_min = t0;
    u_max = t1;
    periodic = closed;
  }
  void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
    double c = std::cos(u), s = std::sin(u);
    p = {a_ * c, b_ * s};
    d1 = {-a_ * s, b_ * c};
    d2 = {-a_ * c, -b_ * s};
  }
  Vec2 eval3(double u) const override { return {a_ * std::sin(u), -b_ * std::cos(u)}; }
  void taylor(double u, int order, DSeries& x, DSeries& y) const override {
    DSeries t = DSeries::variable(u, order), s, c;
    series_sincos(t, s, c);
    x = c * a_;
    y = s * b_;
  }
  double a_, b_;
};

class GraphSource final : public CurveSource {
 public:
  GraphSource(Expr f, double x0, double x1) : f_(std::move(f)) {
    u_min = x0;
    u_max = x1;
  }
  void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
    Jet<2> j = f_.eval(Jet<2>::variable(u));
    p = {u, j[0]};
    d1 = {1.0, j[1]};
    d2 = {0.0, 2.0 * j[2]};
  }
  Vec2 eval3(double u) const override {
    Jet<3> j = f_.eval(Jet<3>::variable(u));
    return {0.0, 6.0 * j[3]};
  }
  void taylor(double u, int order, DSeries& x, DSeries& y) const override {
    x = DSeries::variable(u, order);
    y = f_.eval(x);
  }
  Expr f_;
};

/// Local quintic (6-point Lagrange) interpolation of a point list in chord-length parameter.
class SampledSource final : public CurveSource {
 public:
  SampledSource(std::vector<Vec2> pts, bool closed) : pts_(std::move(pts)), closed_(closed) {
    std::size_t n = pts_.size();
    t_.assign(n + (closed_ ? 1 : 0), 0.0);
    for (std::size_t i = 1; i < t_.size(); ++i) t_[i] = t_[i - 1] + norm(pts_[i % n] - pts_[i - 1]);
    u_min = 0.0;
    u_max = t_.back();
    periodic = closed_;
  }
  // Node parameter and point with periodic extension.
  void node(long i, double& t, Vec2& p) const {
    long n = static_cast<long>(pts_.size());
    if (closed_) {
      long q = (i >= 0) ? i / n : -((-i + n - 1) / n);
      long r = i - q * n;
      t = t_[static_cast<std::size_t>(r)] + q * t_.back();
      p = pts_[static_cast<std::size_t>(r)];
    } else {
      long c = std::clamp(i, 0L, n - 1);
      t = t_[static_cast<std::size_t>(c)];
      p = pts_[static_cast<std::size_t>(c)];
    }
  }
  long first_node(double u) const {
    long n = static_cast<long>(pts_.size());
    double uu = u;
    long shift = 0;
    if (closed_) {
      double per = t_.back();
      double q = std::floor(u / per);
      uu = u - q * per;
      shift = static_cast<long>(q) * n;
    }
    long k = static_cast<long>(std::upper_bound(t_.begin(), t_.end(), uu) - t_.begin()) - 1;
    k -= 2;
    if (!closed_) k = std::clamp(k, 0L, n - 6);
    return k + shift;
  }
  // Coefficients of the local quintic in powers of (v - u).
  void local_poly(double u, double cx[6], double cy[6]) const {
    long k = first_node(u);
    double ts[6];
    Vec2 ps[6];
    for (int i = 0; i < 6; ++i) node(k + i, ts[i], ps[i]);
    for (int i = 0; i < 6; ++i) cx[i] = cy[i] = 0.0;
    for (int i = 0; i < 6; ++i) {
      // Lagrange basis polynomial in e = v - u, expanded.
      double poly[6] = {1, 0, 0, 0, 0, 0};
      double denom = 1.0;
      int deg = 0;
      for (int j = 0; j < 6; ++j) {
        if (j == i) continue;
        double r = ts[j] - u;  // factor (e - r)
        for (int d = deg + 1; d >= 1; --d) poly[d] = poly[d - 1] - r * poly[d];
        poly[0] = -r * poly[0];
        ++deg;
        denom *= ts[i] - ts[j];
      }
      for (int d = 0; d < 6; ++d) {
        cx[d] += ps[i].x * poly[d] / denom;
        cy[d] += ps[i].y * poly[d] / denom;
      }
    }
  }
  void eval(double u, Vec2& p, Vec2& d1, Vec2& d2) const override {
    double cx[6], cy[6];
    local_poly(u, cx, cy);
    p = {cx[0], cy[0]};
    d1 = {cx[1], cy[1]};
    d2 = {2 * cx[2], 2 * cy[2]};
  }
  Vec2 eval3(double u) const override {
    double cx[6], cy[6];
    local_poly(u, cx, cy);
    return {6 * cx[3], 6 * cy[3]};
  }
  void taylor(double u, int order, DSeries& x, DSeries& y) const override {
    double cx[6], cy[6];
    local_poly(u, cx, cy);
    x = DSeries(order, 0.0);
    y = DSeries(order, 0.0);
    for (int d = 0; d <= std::min(order, 5); ++d) {
      x[d] = cx[d];
      y[d] = cy[d];
    }
  }
  std::vector<Vec2> pts_;
  std::vector<double> t_;
  bool closed_;
};

double speed_of(const CurveSource& src, double u) {
  Vec2 p, d1, d2;
  src.eval(u, p, d1, d2);
  return norm(d1);
}

double kspeed_of(const CurveSource& src, double u) {
  Vec2 p, d1, d2;
  src.eval(u, p, d1, d2);
  return cross(d1, d2) / dot(d1, d1);
}

}  // namespace

double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

double wrap_pi(double a) {
  double r = wrap_2pi(a);
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

const char* end_kind_name(EndKind k) {
  switch (k) {
    case EndKind::FiniteEndpoint: return "finite-endpoint";
    case EndKind::AsymptoticLine: return "asymptotic-line";
    case EndKind::UnboundedNoAsymptote: return "unbounded-no-asymptote";
    case EndKind::Periodic: return "periodic";
  }
  return "?";
}

CurveSpec CurveSpec::circle(double R) {
  CurveSpec s;
  s.kind = Kind::Circle;
  s.radius = R;
  return s;
}
CurveSpec CurveSpec::ellipse(double a, double b) {
  CurveSpec s;
  s.kind = Kind::Ellipse;
  s.a_axis = a;
  s.b_axis = b;
  return s;
}
CurveSpec CurveSpec::ellipse_arc(double a, double b, double t0, double t1) {
  CurveSpec s = ellipse(a, b);
  s.t_range = std::array<double, 2>{t0, t1};
  return s;
}
CurveSpec CurveSpec::graph(const std::string& f, double x0, double x1) {
  CurveSpec s;
  s.kind = Kind::Graph;
  s.expression = f;
  s.x_min = x0;
  s.x_max = x1;
  return s;
}
CurveSpec CurveSpec::sampled(std::vector<Vec2> pts, bool closed) {
  CurveSpec s;
  s.kind = Kind::Sampled;
  s.points = std::move(pts);
  s.closed_points = closed;
  return s;
}

std::string CurveSpec::describe() const {
  char buf[256];
  switch (kind) {
    case Kind::Circle: std::snprintf(buf, sizeof buf, "circle(R=%.17g)", radius); break;
    case Kind::Ellipse:
      if (t_range)
        std::snprintf(buf, sizeof buf, "ellipse-arc(a=%.17g,b=%.17g,t=[%.17g,%.17g])", a_axis, b_axis,
                      (*t_range)[0], (*t_range)[1]);
      else
        std::snprintf(buf, sizeof buf, "ellipse(a=%.17g,b=%.17g)", a_axis, b_axis);
      break;
    case Kind::Graph:
      std::snprintf(buf, sizeof buf, "graph(y=%s,x=[%.17g,%.17g])", expression.c_str(), fmt_inf(x_min),
                    fmt_inf(x_max));
      break;
    case Kind::Sampled:
      std::snprintf(buf, sizeof buf, "sampled(n=%zu,%s)", points.size(), closed_points ? "closed" : "open");
      break;
  }
  return buf;
}

EndBehavior infer_graph_end(const Expr& f, int dir) {
  EndBehavior eb;
  double m[6], c[6];
  bool finite = true;
  for (int k = 0; k < 6; ++k) {
    double X = dir * std::pow(10.0, 1 + k);
    Jet<1> j = f.eval(Jet<1>::variable(X));
    m[k] = j[1];
    c[k] = j[0] - j[1] * X;
    finite = finite && std::isfinite(m[k]) && std::isfinite(c[k]);
  }
  if (finite) {
    double dm = std::fabs(m[5] - m[4]), dc = std::fabs(c[5] - c[4]);
    bool slope_ok = dm <= 1e-6 * (1.0 + std::fabs(m[5])) && dm <= std::fabs(m[2] - m[1]) + 1e-15;
    bool icpt_ok = dc <= 1e-4 * (1.0 + std::fabs(c[5])) && dc <= std::fabs(c[2] - c[1]) + 1e-12;
    if (slope_ok && icpt_ok) {
      eb.kind = EndKind::AsymptoticLine;
      eb.direction = unit(Vec2{static_cast<double>(dir), dir * m[5]});
      return eb;
    }
  }
  eb.kind = EndKind::UnboundedNoAsymptote;
  return eb;
}

ConvexCurve build_curve(const CurveSpec& spec) {
  ConvexCurve c;
  c.spec_ = spec;
  std::shared_ptr<CurveSource> src;
  switch (spec.kind) {
    case CurveSpec::Kind::Circle:
      if (!(spec.radius > 0) || !std::isfinite(spec.radius)) fail(ErrorCode::DegenerateSpec, "radius must be positive");
      src = std::make_shared<CircleSource>(spec.radius);
      break;
    case CurveSpec::Kind::Ellipse: {
      if (!(spec.a_axis > 0 && spec.b_axis > 0)) fail(ErrorCode::DegenerateSpec, "ellipse axes must be positive");
      if (spec.t_range) {
        double t0 = (*spec.t_range)[0], t1 = (*spec.t_range)[1];
        if (!(t1 > t0)) fail(ErrorCode::DegenerateSpec, "empty ellipse parameter range");
        if (t1 - t0 >= kTwoPi) fail(ErrorCode::DegenerateSpec, "ellipse arc longer than the full curve");
        src = std::make_shared<EllipseSource>(spec.a_axis, spec.b_axis, t0, t1, false);
      } else {
        src = std::make_shared<EllipseSource>(spec.a_axis, spec.b_axis, 0.0, kTwoPi, true);
      }
      break;
    }
    case CurveSpec::Kind::Graph: {
      Expr f = Expr::parse(spec.expression);
      double x0 = std::max(spec.x_min, spec.window_min), x1 = std::min(spec.x_max, spec.window_max);
      if (!(x1 > x0)) fail(ErrorCode::DegenerateSpec, "zero-length x-range");
      c.unbounded_[0] = std::isinf(spec.x_min);
      c.unbounded_[1] = std::isinf(spec.x_max);
      src = std::make_shared<GraphSource>(f, x0, x1);
      break;
    }
    case CurveSpec::Kind::Sampled:
      if (spec.points.size() < 7) fail(ErrorCode::DegenerateSpec, "need at least 7 sample points");
      src = std::make_shared<SampledSource>(spec.points, spec.closed_points);
      if (!(src->u_max > 0)) fail(ErrorCode::DegenerateSpec, "zero-length point list");
      break;
  }
  c.src_ = src;
  c.closed_ = src->periodic;

  const int n = std::max(64, spec.resolution);
  const double du = (src->u_max - src->u_min) / n;
  c.u_table_.resize(static_cast<std::size_t>(n + 1));
  c.s_table_.assign(static_cast<std::size_t>(n + 1), 0.0);
  c.angle_table_.assign(static_cast<std::size_t>(n + 1), 0.0);
  {
    Vec2 p, d1, d2;
    src->eval(src->u_min, p, d1, d2);
    c.angle0_ = angle_of(d1);
  }
  c.angle_table_[0] = c.angle0_;
  for (int k = 0; k <= n; ++k) c.u_table_[static_cast<std::size_t>(k)] = src->u_min + k * du;
  c.u_table_.back() = src->u_max;
  for (int k = 0; k < n; ++k) {
    double a = c.u_table_[static_cast<std::size_t>(k)], b = c.u_table_[static_cast<std::size_t>(k + 1)];
    for (double u : {a, 0.5 * (a + b)}) {
      Vec2 p, d1, d2;
      src->eval(u, p, d1, d2);
      double kap = cross(d1, d2) / std::pow(dot(d1, d1), 1.5);
      if (!(kap > kMinCurvature)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "curvature %.3g at parameter %.6g", kap, u);
        fail(ErrorCode::NonConvex, buf);
      }
    }
    double ds = gauss16([&](double u) { return speed_of(*src, u); }, a, b);
    double dt = gauss16([&](double u) { return kspeed_of(*src, u); }, a, b);
    if (!std::isfinite(ds) || !std::isfinite(dt)) fail(ErrorCode::QuadratureFailure, "non-finite arc length");
    c.s_table_[static_cast<std::size_t>(k + 1)] = c.s_table_[static_cast<std::size_t>(k)] + ds;
    c.angle_table_[static_cast<std::size_t>(k + 1)] = c.angle_table_[static_cast<std::size_t>(k)] + dt;
  }
  if (!(c.length() > 0)) fail(ErrorCode::DegenerateSpec, "zero arc length");

  if (c.closed_) {
    c.ends_[0].kind = c.ends_[1].kind = EndKind::Periodic;
  } else if (spec.kind == CurveSpec::Kind::Graph) {
    Expr f = Expr::parse(spec.expression);
    for (int e = 0; e < 2; ++e)
      c.ends_[e] = c.unbounded_[e] ? infer_graph_end(f, e == 0 ? -1 : 1) : EndBehavior{};
  }
  for (int e = 0; e < 2; ++e)
    if (spec.end_override[e]) c.ends_[e].kind = *spec.end_override[e];

  if (spec.origin) {
    c.origin_ = *spec.origin;
  } else {
    const int m = 1024;
    Vec2 acc;
    for (int i = 0; i < m; ++i) acc = acc + c.position((i + 0.5) * c.length() / m);
    c.origin_ = (1.0 / m) * acc;
  }
  return c;
}

int ConvexCurve::panel_of_u(double u) const {
  double du = u_table_[1] - u_table_[0];
  int k = static_cast<int>(std::floor((u - u_table_[0]) / du));
  return std::clamp(k, 0, static_cast<int>(u_table_.size()) - 2);
}

bool ConvexCurve::in_domain(double s) const { return closed_ || (s >= -1e-12 && s <= length() + 1e-12); }

double ConvexCurve::reduce(double s) const {
  if (!closed_) return s;
  double L = length();
  double r = std::fmod(s, L);
  if (r < 0) r += L;
  return r;
}

double ConvexCurve::s_of(double u) const {
  double shift = 0.0;
  if (closed_) {
    double U = src_->u_max - src_->u_min;
    double q = std::floor((u - src_->u_min) / U);
    u -= q * U;
    shift = q * length();
  }
  int k = panel_of_u(u);
  double uk = u_table_[static_cast<std::size_t>(k)];
  return shift + s_table_[static_cast<std::size_t>(k)] +
         gauss16([&](double v) { return speed_of(*src_, v); }, uk, u);
}

double ConvexCurve::param_of(double s) const {
  double shift = 0.0;
  double r = s;
  if (closed_) {
    double L = length();
    double q = std::floor(s / L);
    r = s - q * L;
    shift = q * (src_->u_max - src_->u_min);
  }
  int k = static_cast<int>(std::upper_bound(s_table_.begin(), s_table_.end(), r) - s_table_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(s_table_.size()) - 2);
  double uk = u_table_[static_cast<std::size_t>(k)], sk = s_table_[static_cast<std::size_t>(k)];
  double frac = (r - sk) / (s_table_[static_cast<std::size_t>(k + 1)] - sk);
  double u = uk + frac * (u_table_[static_cast<std::size_t>(k + 1)] - uk);
  for (int it = 0; it < 8; ++it) {
    double f = sk + gauss16([&](double v) { return speed_of(*src_, v); }, uk, u) - r;
    double step = f / speed_of(*src_, u);
    u -= step;
    if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(u))) break;
  }
  return u + shift;
}

Vec2 ConvexCurve::position(double s) const {
  Vec2 p, d1, d2;
  src_->eval(param_of(s), p, d1, d2);
  return p;
}

Vec2 ConvexCurve::tangent(double s) const {
  Vec2 p, d1, d2;
  src_->eval(param_of(s), p, d1, d2);
  return unit(d1);
}

double ConvexCurve::curvature(double s) const {
  Vec2 p, d1, d2;
  src_->eval(param_of(s), p, d1, d2);
  return cross(d1, d2) / std::pow(dot(d1, d1), 1.5);
}

double ConvexCurve::curvature_derivative(double s) const {
  double u = param_of(s);
  Vec2 p, d1, d2;
  src_->eval(u, p, d1, d2);
  Vec2 d3 = src_->eval3(u);
  double v2 = dot(d1, d1), v = std::sqrt(v2);
  double num = cross(d1, d2), dnum = cross(d1, d3);
  double dv = dot(d1, d2) / v;
  // kappa = num / v^3 ; d/du then divide by speed
  double dk_du = dnum / (v2 * v) - 3.0 * num * dv / (v2 * v2);
  return dk_du / v;
}

double ConvexCurve::tangent_angle(double s) const {
  double u = param_of(s);
  double shift = 0.0;
  if (closed_) {
    double U = src_->u_max - src_->u_min;
    double q = std::floor((u - src_->u_min) / U);
    u -= q * U;
    shift = q * kTwoPi;
  }
  int k = panel_of_u(u);
  return shift + angle_table_[static_cast<std::size_t>(k)] +
         gauss16([&](double v) { return kspeed_of(*src_, v); }, u_table_[static_cast<std::size_t>(k)], u);
}

double ConvexCurve::arclength_between(double u1, double u2) const {
  return chord_data(u1, u2).sigma;
}

ConvexCurve::ChordData ConvexCurve::chord_data(double u1, double u2) const {
  ChordData out{0.0, 0.0, 0.0, 0.0};
  if (u1 == u2) return out;
  if (spec_.kind == CurveSpec::Kind::Circle) {
    double R = spec_.radius, d = u2 - u1;
    double sh = std::sin(0.5 * d);
    out.sigma = R * d;
    out.turn = d;
    out.par = R * std::sin(d);
    out.perp = 2.0 * R * sh * sh;
    return out;
  }
  const ChebPanel& cp = ChebPanel::standard();
  const int m = cp.size();
  // Panel count from the tabulated turning and the parameter span.
  double turn_est;
  {
    auto ang_at = [&](double u) {
      double shift = 0.0;
      if (closed_) {
        double U = src_->u_max - src_->u_min;
        double q = std::floor((u - src_->u_min) / U);
        u -= q * U;
        shift = q * kTwoPi;
      }
      int k = panel_of_u(u);
      return shift + angle_table_[static_cast<std::size_t>(k)];
    };
    turn_est = std::fabs(ang_at(u2) - ang_at(u1)) + 0.05;
  }
  double uspan = (src_->u_max - src_->u_min) / 8.0;
  int panels = std::max({1, static_cast<int>(std::ceil(turn_est / 0.3)),
                         static_cast<int>(std::ceil(std::fabs(u2 - u1) / uspan))});
  double hstep = (u2 - u1) / panels;
  std::vector<double> sp(static_cast<std::size_t>(m)), ks(static_cast<std::size_t>(m)),
      cum(static_cast<std::size_t>(m)), fc(static_cast<std::size_t>(m)), fs(static_cast<std::size_t>(m));
  double turn0 = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = u1 + p * hstep;
    double h = 0.5 * hstep;
    for (int j = 0; j < m; ++j) {
      double u = a + (cp.node(j) + 1.0) * h;
      Vec2 P, d1, d2;
      src_->eval(u, P, d1, d2);
      double v2 = dot(d1, d1);
      sp[static_cast<std::size_t>(j)] = std::sqrt(v2);
      ks[static_cast<std::size_t>(j)] = cross(d1, d2) / v2;
    }
    cp.cumulative(ks.data(), cum.data());
    for (int j = 0; j < m; ++j) {
      double t = turn0 + h * cum[static_cast<std::size_t>(j)];
      fc[static_cast<std::size_t>(j)] = std::cos(t) * sp[static_cast<std::size_t>(j)];
      fs[static_cast<std::size_t>(j)] = std::sin(t) * sp[static_cast<std::size_t>(j)];
    }
    out.sigma += h * cp.total(sp.data());
    out.par += h * cp.total(fc.data());
    out.perp += h * cp.total(fs.data());
    turn0 += h * cum[static_cast<std::size_t>(m - 1)];
  }
  out.turn = turn0;
  return out;
}

void ConvexCurve::arc_taylor(double s, int order, DSeries& x, DSeries& y, DSeries& kappa) const {
  double u0 = param_of(s);
  int K = order + 3;
  DSeries X, Y;
  src_->taylor(u0, K, X, Y);
  DSeries dX = derivative(X), dY = derivative(Y);
  DSeries ddX = derivative(dX), ddY = derivative(dY);
  DSeries v2 = dX * dX + dY * dY;
  DSeries speed = series_sqrt(v2);
  DSeries sfun = integral(speed);
  DSeries e = revert(sfun);
  DSeries k = (dX * ddY - dY * ddX) * series_recip(series_pow(v2, 1.5));
  x = compose(X, e).truncated(order);
  y = compose(Y, e).truncated(order);
  kappa = compose(k, e).truncated(order);
}

std::string ConvexCurve::to_csv(int samples) const {
  std::ostringstream os;
  os << "s,x,y,kappa\n";
  char buf[160];
  for (int i = 0; i < samples; ++i) {
    double s = closed_ ? length() * i / samples : length() * i / (samples - 1);
    Vec2 p = position(s);
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e\n", s, p.x, p.y, curvature(s));
    os << buf;
  }
  return os.str();
}

double curvature_at(const ConvexCurve& curve, double s) {
  if (!curve.in_domain(s)) fail(ErrorCode::OutOfDomain, "arc length " + std::to_string(s) + " outside domain");
  return curve.curvature(s);
}

ArcLengthMap arclength_reparametrize(const std::vector<Vec2>& points, bool closed) {
  ConvexCurve c = build_curve(CurveSpec::sampled(points, closed));
  return {c, c.length()};
}

ArcLengthMap arclength_reparametrize(const std::string& expression, double x0, double x1) {
  ConvexCurve c = build_curve(CurveSpec::graph(expression, x0, x1));
  return {c, c.length()};
}

}  // namespace billiards
