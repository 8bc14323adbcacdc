#include "billiards/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "billiards/billiard.hpp"
#include "billiards/caustics.hpp"
#include "billiards/config.hpp"
#include "billiards/conjugacy.hpp"
#include "billiards/error.hpp"
#include "billiards/fit.hpp"
#include "billiards/foliation.hpp"
#include "billiards/mm_series.hpp"
#include "billiards/normal_form.hpp"
#include "billiards/report.hpp"
#include "billiards/svg.hpp"

namespace fs = std::filesystem;

namespace billiards {

namespace {

// 1e4 ulps of y: below this an invariance defect is rounding in the evaluation of h.
constexpr double kDefectFloor = 1e4 * std::numeric_limits<double>::epsilon();

const std::vector<std::string> kCurveKeys = {"kind", "radius", "a", "b", "t0", "t1", "f", "x0", "x1", "window_min",
                                             "window_max", "file", "closed", "resolution", "end_begin", "end_end",
                                             "samples"};

const std::map<std::string, std::vector<std::string>>& config_schema() {
  static const std::map<std::string, std::vector<std::string>> schema = {
      {"curve", kCurveKeys},
      {"curve2", kCurveKeys},
      {"orbit", {"s0", "y0", "phi0", "steps", "backward"}},
      {"series", {"order", "eval_order", "spacing", "y_min", "y_max", "points", "probes"}},
      {"caustics", {"order", "eval_order", "spacing", "levels", "samples", "orbits", "steps", "points", "s_a", "s_b"}},
      {"foliate", {"order", "eval_order", "spacing", "levels", "eps", "amplitude", "sharpness", "chi", "sigma", "eta",
                   "s_lo", "s_hi", "s0", "y_max", "samples", "orbits", "steps", "points", "windows"}},
      {"conjugacy", {"catalog", "samples"}}};
  return schema;
}

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> rows;
};

class Context {
 public:
  Context(const std::string& cmd, const GlobalOptions& o, std::ostream& out)
      : opt(o), out(out), report(cmd), tol(Tolerances::profile(o.profile)), rng(o.seed) {
    report.seed(o.seed);
    fs::create_directories(o.out_dir);
    report.tolerance("det_defect", tol.det_defect);
    report.tolerance("chart_det", tol.chart_det);
    report.tolerance("slope_margin", tol.slope_margin);
    report.tolerance("tangency_scale", tol.tangency_scale);
    report.tolerance("symmetry_rad", tol.symmetry_rad);
    report.tolerance("envelope_scale", tol.envelope_scale);
    report.tolerance("conic_residual", tol.conic_residual);
    report.tolerance("circle_defect", tol.circle_defect);
  }

  void load() {
    if (opt.config_path.empty()) fail(ErrorCode::Validation, "--config PATH is required");
    cfg = KeyValueConfig::load(opt.config_path);
    cfg.require_known(config_schema());
    report.echo(cfg.entries());
  }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = fs::path(opt.out_dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) fail(ErrorCode::Io, "cannot write '" + p.string() + "'");
    f << text;
    report.artifact(name);
    return p.string();
  }

  void table(const std::string& stem, const Table& t) {
    std::ostringstream o;
    if (opt.format == "json") {
      nlohmann::ordered_json j;
      j["columns"] = t.cols;
      j["rows"] = nlohmann::ordered_json::array();
      for (const auto& r : t.rows) j["rows"].push_back(r);
      write(stem + ".json", j.dump() + "\n");
      return;
    }
    o.precision(17);
    for (std::size_t i = 0; i < t.cols.size(); ++i) o << (i ? "," : "") << t.cols[i];
    o << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << "\n";
    }
    write(stem + ".csv", o.str());
  }

  int finish() {
    write("report.json", report.to_json());
    out << report.summary();
    return report.all_pass() ? 0 : 3;
  }

  const GlobalOptions& opt;
  std::ostream& out;
  Report report;
  Tolerances tol;
  KeyValueConfig cfg;
  std::mt19937_64 rng;
};

std::vector<Vec2> curve_polyline(const ConvexCurve& c, int n) {
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(c.position(c.length() * i / n));
  return pts;
}

// ---------------------------------------------------------------- curve

int cmd_curve(Context& cx) {
  cx.load();
  ConvexCurve c = build_curve(curve_spec_from(cx.cfg, "curve"));
  int n = cx.cfg.integer("curve", "samples", 1024);
  if (n < 8 || n > 1 << 22) fail(ErrorCode::Validation, "[curve] samples must lie in [8, 4194304]");
  Table t{{"s", "x", "y", "kappa"}, {}};
  double kmin = INFINITY, kmax = 0.0, unit = 0.0;
  for (int i = 0; i <= n; ++i) {
    double s = c.length() * i / n;
    Vec2 p = c.position(s);
    double k = c.curvature(s);
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
    unit = std::max(unit, std::fabs(norm(c.tangent(s)) - 1.0));
    t.rows.push_back({s, p.x, p.y, k});
  }
  cx.table("curve", t);
  cx.report.value("length", c.length());
  cx.report.value("kappa_min", kmin);
  cx.report.value("kappa_max", kmax);
  cx.report.check("unit_tangent", unit, "<=", 1e-10);
  cx.report.check("strict_convexity", kmin, ">", 1e-12);
  cx.report.verdict("end_begin", end_kind_name(c.end_behavior(0).kind));
  cx.report.verdict("end_end", end_kind_name(c.end_behavior(1).kind));
  cx.report.value("lazutkin_window", lazutkin_length_between(c, 0.0, c.length()));
  if (cx.opt.svg) {
    SvgDocument svg;
    svg.layer("curve");
    svg.polyline(curve_polyline(c, 1024), "black", 1.5, c.closed());
    cx.write("curve.svg", svg.str());
  }
  return cx.finish();
}

// ---------------------------------------------------------------- orbit

int cmd_orbit(Context& cx) {
  cx.load();
  ConvexCurve c = build_curve(curve_spec_from(cx.cfg, "curve"));
  BilliardMap m(c);
  double s0 = cx.cfg.num("orbit", "s0", 0.0);
  int steps = cx.cfg.integer("orbit", "steps", 100);
  if (steps < 1 || steps > 10000000) fail(ErrorCode::Validation, "[orbit] steps must lie in [1, 1e7]");
  PhasePoint p0;
  if (cx.cfg.has("orbit", "phi0")) {
    p0 = {Chart::SPhi, s0, cx.cfg.num("orbit", "phi0", 0.1)};
    if (!(p0.c2 > 0.0 && p0.c2 < std::acos(-1.0))) fail(ErrorCode::Validation, "[orbit] phi0 must lie in (0, pi)");
  } else {
    double y0 = cx.cfg.num("orbit", "y0", 0.02);
    if (!(y0 > 0.0 && y0 < 2.0)) fail(ErrorCode::Validation, "[orbit] y0 must lie in (0, 2)");
    p0 = {Chart::SY, s0, y0};
  }
  if (!c.in_domain(s0)) fail(ErrorCode::Validation, "[orbit] s0 outside the curve's arc-length range");
  Orbit o = orbit(m, p0, steps, OrbitStop::Escape, cx.cfg.flag("orbit", "backward", false));
  Table t{{"j", "s", "phi", "y", "x_coord", "y_coord"}, {}};
  double ymin = INFINITY, ymax = 0.0;
  for (const auto& st : o.steps) {
    t.rows.push_back({static_cast<double>(st.j), st.s, st.phi, st.y, st.pos.x, st.pos.y});
    ymin = std::min(ymin, st.y);
    ymax = std::max(ymax, st.y);
  }
  cx.table("orbit", t);
  cx.report.value("steps_taken", static_cast<double>(o.steps.size()) - 1.0);
  cx.report.value("y_spread", ymax - ymin);
  cx.report.verdict("escaped", o.escaped ? "yes" : "no");
  if (o.escaped) cx.report.verdict("stop_reason", o.stop_reason);
  if (cx.opt.svg) {
    SvgDocument svg;
    svg.layer("curve");
    svg.polyline(curve_polyline(c, 1024), "black", 1.5, c.closed());
    svg.layer("chords");
    for (std::size_t i = 1; i < o.steps.size(); ++i) svg.segment(o.steps[i - 1].pos, o.steps[i].pos, "steelblue", 0.5);
    cx.write("orbit.svg", svg.str());
  }
  return cx.finish();
}

// ---------------------------------------------------------------- series

InvariantSeries series_from(const KeyValueConfig& cfg, const std::string& sec, const ConvexCurve& c, int order) {
  SeriesOptions so;
  so.order = order;
  so.eval_order = cfg.integer(sec, "eval_order", so.eval_order);
  so.spacing = cfg.num(sec, "spacing", 0.0);
  if (so.spacing < 0.0) fail(ErrorCode::Validation, "[" + sec + "] spacing must be >= 0");
  return build_series(c, so);
}

std::vector<double> probe_points(const InvariantSeries& ser, std::mt19937_64& rng, int n) {
  double a = ser.s_begin(), b = ser.s_end(), span = b - a;
  std::uniform_real_distribution<double> u(a + 0.1 * span, a + 0.6 * span);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(u(rng));
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_series(Context& cx) {
  cx.load();
  ConvexCurve c = build_curve(curve_spec_from(cx.cfg, "curve"));
  BilliardMap m(c);
  int N = cx.cfg.integer("series", "order", 3);
  InvariantSeries ser = series_from(cx.cfg, "series", c, N);
  double y0 = cx.cfg.num("series", "y_min", 1e-4), y1 = cx.cfg.num("series", "y_max", 1e-2);
  int np = cx.cfg.integer("series", "points", 12), nprobe = cx.cfg.integer("series", "probes", 24);
  if (!(y0 > 0.0 && y1 > y0 && y1 < 0.5)) fail(ErrorCode::Validation, "[series] need 0 < y_min < y_max < 0.5");
  if (np < 3 || nprobe < 1) fail(ErrorCode::Validation, "[series] points >= 3 and probes >= 1");
  std::vector<double> probes = probe_points(ser, cx.rng, nprobe);

  Table coeffs;
  coeffs.cols.push_back("s");
  for (int k = 1; k <= N; ++k) coeffs.cols.push_back("g" + std::to_string(k));
  for (int k = 1; k <= N; ++k) coeffs.cols.push_back("t" + std::to_string(k));
  for (int k = 1; k <= N; ++k) coeffs.cols.push_back("h" + std::to_string(k));
  for (double s : ser.grid()) {
    std::vector<double> r{s};
    for (int k = 1; k <= N; ++k) r.push_back(ser.g(k, s));
    for (int k = 1; k <= N; ++k) r.push_back(ser.t(k, s));
    for (int k = 1; k <= N; ++k) r.push_back(ser.h(k, s));
    coeffs.rows.push_back(r);
  }
  cx.table("series", coeffs);

  Table defects{{"n", "y", "defect"}, {}};
  for (int n = 1; n <= N; ++n) {
    std::vector<double> ys, ds;
    for (int i = 0; i < np; ++i) {
      double y = y0 * std::pow(y1 / y0, static_cast<double>(i) / (np - 1));
      double d = invariance_defect(ser, m, n, y, probes, SeriesKind::H);
      ys.push_back(y);
      ds.push_back(d);
      defects.rows.push_back({static_cast<double>(n), y, d});
    }
    // Defects under the evaluation rounding of h carry no decay information.
    std::vector<double> yk, dk;
    for (std::size_t i = 0; i < ys.size(); ++i)
      if (ds[i] > kDefectFloor * ys[i]) {
        yk.push_back(ys[i]);
        dk.push_back(ds[i]);
      }
    std::string name = "defect_slope_n" + std::to_string(n);
    if (yk.size() < 3) {
      cx.report.check(name, INFINITY, ">=", n + cx.tol.slope_margin);
      cx.report.warn(name + ": defect at roundoff level, treated as exact");
    } else {
      LineFit lf = loglog_fit(yk, dk);
      cx.report.check(name, lf.slope, ">=", n + cx.tol.slope_margin);
      if (yk.size() < ys.size())
        cx.report.warn(name + ": " + std::to_string(ys.size() - yk.size()) + " points at roundoff level left out of the fit");
    }
  }
  cx.table("defects", defects);
  cx.report.check("symmetry_defect", ser.symmetry_defect(), "<", 1e-8);
  cx.report.check("ode_residual", ser.ode_residual(), "<", 1e-8);
  cx.report.check("profile_rms", ser.profile().rms_residual, "<", 1e-8);
  cx.report.value("grid_points", static_cast<double>(ser.grid().size()));
  cx.report.value("spacing", ser.spacing());
  if (c.spec().kind == CurveSpec::Kind::Circle) {
    double worst = 0.0;
    for (int k = 1; k <= N; ++k) {
      double ref = ser.h(k, ser.grid().front());
      for (double s : ser.grid())
        worst = std::max(worst, std::fabs(ser.h(k, s) - ref) / std::max(std::fabs(ref), 1e-300));
    }
    cx.report.check("circle_coefficients_constant", worst, "<", 1e-6);
  }
  return cx.finish();
}

// ---------------------------------------------------------------- caustics helpers

void validate_ladder(Context& cx, const BilliardMap& m, const std::vector<CausticCurve>& leaves,
                     const std::string& tag, int orbits, int steps, int points) {
  const ConvexCurve& c = m.curve();
  bool ellipse = c.spec().kind == CurveSpec::Kind::Ellipse;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const CausticCurve& lf = leaves[i];
    char lvl[64];
    std::snprintf(lvl, sizeof lvl, "%s_level%zu", tag.c_str(), i);
    TangencyReport tr = tangency_validate(m, lf, orbits, steps, points, cx.tol.tangency_scale);
    double scale = tr.scale;
    cx.report.check(std::string(lvl) + "_point_residual", lf.point_residual, "<", cx.tol.envelope_scale * scale);
    cx.report.check(std::string(lvl) + "_tangency_residual", lf.tangency_residual, "<", cx.tol.envelope_scale * scale);
    cx.report.check(std::string(lvl) + "_orbit_distance", tr.max_distance, "<", cx.tol.tangency_scale * scale);
    cx.report.check(std::string(lvl) + "_reflection_symmetry", tr.max_symmetry, "<", cx.tol.symmetry_rad);
    cx.report.check(std::string(lvl) + "_symmetry_points", tr.symmetry_points, ">", 0);
    cx.report.value(std::string(lvl) + "_cusp_points", lf.cusp_points);
    if (ellipse && !c.spec().t_range) {
      std::vector<Vec2> pts;
      for (std::size_t k = 0; k < lf.points.size(); ++k)
        if (lf.regular[k]) pts.push_back(lf.points[k]);
      ConicFit f = fit_confocal(pts, c.spec().a_axis, c.spec().b_axis);
      cx.report.value(std::string(lvl) + "_lambda", f.lambda);
      cx.report.check(std::string(lvl) + "_confocal_residual", f.residual, "<", cx.tol.conic_residual);
    }
    Table t{{"theta", "vartheta", "p", "x", "y", "rho", "regular"}, {}};
    for (std::size_t k = 0; k < lf.points.size(); ++k)
      t.rows.push_back({lf.theta[k], lf.vartheta[k], lf.p[k], lf.points[k].x, lf.points[k].y, lf.rho[k],
                        lf.regular[k] ? 1.0 : 0.0});
    cx.table(std::string("caustic_") + lvl, t);
  }
}

void ladder_svg(SvgDocument& svg, const std::vector<CausticCurve>& leaves, const std::string& color) {
  for (const auto& lf : leaves) {
    std::vector<Vec2> run;
    for (std::size_t k = 0; k < lf.points.size(); ++k) {
      if (lf.regular[k]) {
        run.push_back(lf.points[k]);
      } else if (!run.empty()) {
        svg.polyline(run, color, 0.8);
        run.clear();
      }
    }
    if (!run.empty()) svg.polyline(run, color, 0.8, lf.closed && run.size() == lf.points.size());
  }
}

void check_assembly(Context& cx, const FoliationAssembly& a, const std::string& tag) {
  cx.report.check(tag + "_nested", a.nested ? 1.0 : 0.0, ">=", 1.0);
  cx.report.check(tag + "_monotone_approach", a.monotone ? 1.0 : 0.0, ">=", 1.0);
  cx.report.check(tag + "_max_tangent_lines", a.max_tangent_lines, "<=", 2.0);
  for (std::size_t i = 0; i < a.hausdorff.size(); ++i)
    cx.report.value(tag + "_hausdorff" + std::to_string(i), a.hausdorff[i]);
  if (a.shrunk) cx.report.warn(tag + ": " + a.warning);
}

// ---------------------------------------------------------------- caustics

int cmd_caustics(Context& cx) {
  cx.load();
  ConvexCurve c = build_curve(curve_spec_from(cx.cfg, "curve"));
  BilliardMap m(c);
  int N = cx.cfg.integer("caustics", "order", 4);
  InvariantSeries ser = series_from(cx.cfg, "caustics", c, N);
  std::vector<double> levels = cx.cfg.list("caustics", "levels", {1e-2, 1e-3, 1e-4});
  for (double l : levels)
    if (!(l > 0.0 && l < 0.1)) fail(ErrorCode::Validation, "[caustics] levels must lie in (0, 0.1)");
  int samples = cx.cfg.integer("caustics", "samples", 4096);
  double L = c.length();
  double sa = cx.cfg.num("caustics", "s_a", c.closed() ? 0.2 * L : 0.05 * L);
  double sb = cx.cfg.num("caustics", "s_b", c.closed() ? 1.2 * L : 0.95 * L);
  std::vector<LineFamily> fams;
  for (double l : levels) fams.push_back(base_leaf(m, ser, N, l, sa, sb, c.closed()));
  FoliationAssembly a = assemble_caustic_foliation(m, fams, samples);
  check_assembly(cx, a, "base");
  validate_ladder(cx, m, a.leaves, "base", cx.cfg.integer("caustics", "orbits", 8),
                  cx.cfg.integer("caustics", "steps", 200), cx.cfg.integer("caustics", "points", 64));
  if (cx.opt.svg) {
    SvgDocument svg;
    svg.layer("curve");
    svg.polyline(curve_polyline(c, 1024), "black", 1.5, c.closed());
    svg.layer("leaves");
    ladder_svg(svg, a.leaves, "firebrick");
    cx.write("caustics.svg", svg.str());
  }
  return cx.finish();
}

// ---------------------------------------------------------------- foliate

int cmd_foliate(Context& cx) {
  cx.load();
  ConvexCurve c = build_curve(curve_spec_from(cx.cfg, "curve"));
  BilliardMap m(c);
  const std::string sec = "foliate";
  int N = cx.cfg.integer(sec, "order", 4);
  InvariantSeries ser = series_from(cx.cfg, sec, c, N);
  std::vector<double> levels = cx.cfg.list(sec, "levels", {1e-2, 1e-3, 1e-4});
  std::sort(levels.begin(), levels.end());
  for (double l : levels)
    if (!(l > 0.0 && l < 0.1)) fail(ErrorCode::Validation, "[foliate] levels must lie in (0, 0.1)");
  std::vector<double> eps = cx.cfg.list(sec, "eps", {0.0, 0.5, 1.0});
  FlatPerturbation psi;
  psi.a = cx.cfg.num(sec, "amplitude", 1e-2);
  psi.c = cx.cfg.num(sec, "sharpness", 10.0);
  if (!(std::fabs(psi.a) < 0.125)) fail(ErrorCode::Validation, "[foliate] amplitude must satisfy |a| < 1/8");
  if (!(psi.c > 0.0)) fail(ErrorCode::Validation, "[foliate] sharpness must be positive");

  // Normal chart on a sub-arc.
  double L = c.length();
  NormalChartOptions no;
  no.order = N;
  no.s_lo = cx.cfg.num(sec, "s_lo", c.closed() ? 0.1 * L : ser.s_begin() + 0.05 * L);
  no.s_hi = cx.cfg.num(sec, "s_hi", c.closed() ? 1.1 * L : ser.s_end() - 0.05 * L);
  no.s0 = cx.cfg.num(sec, "s0", 0.5 * (no.s_lo + no.s_hi));
  no.y_max = cx.cfg.num(sec, "y_max", 0.0);
  no.det_tol = cx.tol.chart_det;
  NormalChart chart(ser, m, no);
  cx.report.value("chart_y_max", chart.y_max());
  {
    double worst = 0.0;
    for (int i = 1; i <= 5; ++i)
      for (double l : levels) {
        double s = no.s_lo + (no.s_hi - no.s_lo) * i / 6.0;
        worst = std::max(worst, chart.det_defect(s, chart.y_on_level(s, l)));
      }
    cx.report.check("chart_det_defect", worst, "<", cx.tol.chart_det);
  }

  // Gluing on the sector at s0 and extension along orbits.
  ChartMap cmap(chart);
  double chi = cx.cfg.num(sec, "chi", 0.3), sigma = cx.cfg.num(sec, "sigma", 0.05);
  double eta = cx.cfg.num(sec, "eta", std::min(0.2, 1.2 * std::sqrt(levels.back())));
  SectorGluing gl = glue_on_sector(cmap, chi, sigma, eta);
  // tau window: the part of the sub-arc reachable at every level, trimmed by 15%.
  double tlo = -INFINITY, thi = INFINITY;
  for (double l : levels) {
    double a = no.s_lo + 0.15 * (no.s_hi - no.s_lo), b = no.s_hi - 0.15 * (no.s_hi - no.s_lo);
    tlo = std::max(tlo, chart.tau(a, chart.y_on_level(a, l)));
    thi = std::min(thi, chart.tau(b, chart.y_on_level(b, l)));
  }
  cmap.prepare_levels(levels);
  ExtensionWindow ew{tlo, thi, levels, 2, 48};
  FoliationField ext = extend_by_dynamics(gl, ew);
  double dev = 0.0;
  int nmax = 0;
  for (const auto& smp : ext.samples) {
    dev = std::max(dev, std::fabs(smp.value - smp.h));
    nmax = std::max(nmax, std::abs(smp.n_steps));
  }
  cx.report.value("extension_certificate", ext.max_certificate());
  cx.report.value("extension_max_steps", nmax);
  cx.report.check("extension_within_certificate", dev, "<=", 2.0 * ext.max_certificate() + 1e-15);
  if (c.spec().kind == CurveSpec::Kind::Circle) cx.report.check("circle_level_defect", dev, "<", cx.tol.circle_defect);
  Table ext_t{{"tau", "h", "n_steps", "value", "bound"}, {}};
  for (const auto& smp : ext.samples)
    ext_t.rows.push_back({smp.tau, smp.h, static_cast<double>(smp.n_steps), smp.value, smp.bound});
  cx.table("extension", ext_t);

  // Perturbed family; one automatic shrink of the window on gradient loss.
  double hlo = 0.5 * levels.front(), hhi = 1.5 * levels.back();
  std::vector<FoliationField> fam;
  try {
    fam = perturbed_family(psi, eps, tlo, thi, hlo, hhi);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::GradientLoss) throw;
    hhi = levels.back();
    double mid = 0.5 * (tlo + thi), half = 0.4 * (thi - tlo);
    tlo = mid - half;
    thi = mid + half;
    cx.report.warn("window shrunk once after gradient loss");
    fam = perturbed_family(psi, eps, tlo, thi, hlo, hhi);
  }
  cx.report.value("window_tau_lo", tlo);
  cx.report.value("window_tau_hi", thi);

  // Distinct germs: every member pair differs somewhere in each probed boundary window.
  int windows = cx.cfg.integer(sec, "windows", 8);
  double hprobe_min = 1.0 / (30.0 * psi.c);
  std::uniform_real_distribution<double> ut(tlo, thi);
  double min_diff = INFINITY;
  for (int w = 0; w < windows; ++w) {
    double tstar = ut(cx.rng);
    for (double delta : {2e-2, 1e-2}) {
      if (delta <= hprobe_min) continue;
      for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
          if (eps[i] == eps[j]) continue;
          double best = 0.0;
          for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 4; ++b) {
              double tau = tstar - delta + 2.0 * delta * (a + 0.5) / 8.0;
              double h = std::max(hprobe_min, 0.25 * delta) + (delta - std::max(hprobe_min, 0.25 * delta)) * b / 4.0;
              best = std::max(best, std::fabs(fam[i].value(tau, h) - fam[j].value(tau, h)));
            }
          min_diff = std::min(min_diff, best);
        }
    }
  }
  if (fam.size() >= 2) cx.report.check("distinct_germs_min_difference", min_diff, ">", 1e-15);
  cx.report.check("foliation_count", static_cast<double>(fam.size()), ">=", 1.0);

  // Caustic ladders per member.
  int samples = cx.cfg.integer(sec, "samples", 2048);
  int orbits = cx.cfg.integer(sec, "orbits", 6), steps = cx.cfg.integer(sec, "steps", 200);
  int points = cx.cfg.integer(sec, "points", 64);
  SvgDocument svg;
  svg.layer("curve");
  svg.polyline(curve_polyline(c, 1024), "black", 1.5, c.closed());
  const char* colors[] = {"firebrick", "seagreen", "royalblue", "darkorange", "purple"};
  std::vector<std::vector<CausticCurve>> ladders;
  for (std::size_t k = 0; k < fam.size(); ++k) {
    std::vector<LineFamily> lf;
    for (double l : levels) lf.push_back(field_leaf(chart, fam[k], l));
    FoliationAssembly a = assemble_caustic_foliation(m, lf, samples);
    std::string tag = "eps" + std::to_string(k);
    check_assembly(cx, a, tag);
    validate_ladder(cx, m, a.leaves, tag, orbits, steps, points);
    svg.layer("ladder_" + tag);
    ladder_svg(svg, a.leaves, colors[k % 5]);
    ladders.push_back(std::move(a.leaves));
  }
  // Caustics of perturbed members differ from the base ones at levels h >= 1/(30 c).
  for (std::size_t k = 1; k < ladders.size(); ++k) {
    if (eps[k] == eps[0]) continue;
    for (std::size_t i = 0; i < ladders[k].size() && i < ladders[0].size(); ++i) {
      if (ladders[k][i].level < hprobe_min) continue;
      double d = 0.0;
      for (std::size_t q = 0; q < ladders[k][i].points.size(); ++q)
        d = std::max(d, norm(ladders[k][i].points[q] - ladders[0][i].points[q]));
      cx.report.check("eps" + std::to_string(k) + "_level" + std::to_string(i) + "_caustic_difference", d, ">", 0.0);
    }
  }

  // Hessian of the base field in the dual plane near the middle leaf.
  {
    const CausticCurve& mid = ladders.front()[ladders.front().size() / 2];
    DualChart dual;
    dual.origin = c.origin();
    const NormalChart* ch = &chart;
    const BilliardMap* mp = &m;
    auto g = [&dual, ch, mp](double x, double y) {
      OrientedLine Lx = dual.to_line({x, y});
      PhasePoint q = mp->phase_of_line(Lx);
      return ch->h(q.c1, y_of_phi(q.c2));
    };
    std::vector<Vec2> pts;
    std::size_t n = mid.lines.size();
    for (int i = 1; i <= 8; ++i) pts.push_back(dual.to_point(mid.lines[n * i / 9]));
    // Dual displacement e moves the line by about e / |X|^2; keep that well inside the chord sagitta.
    double r = norm(pts.front() - dual.origin);
    double step = 1e-2 * mid.level * r * r;
    HessianReport hr = hessian_convexity(g, pts, step);
    cx.report.check("dual_hessian_min_abs", hr.min_abs, ">", 0.0);
    cx.report.verdict("dual_hessian_sign", hr.sign > 0 ? "positive" : hr.sign < 0 ? "negative" : "mixed");
  }
  if (cx.opt.svg) cx.write("foliate.svg", svg.str());
  return cx.finish();
}

// ---------------------------------------------------------------- conjugacy

nlohmann::ordered_json length_json(const LazutkinLengthReport& r) {
  nlohmann::ordered_json j;
  j["finite"] = r.finite();
  if (r.finite()) j["value"] = r.value();
  j["window"] = r.window;
  for (int e = 0; e < 2; ++e) {
    auto& d = j[e == 0 ? "backward" : "forward"];
    d["verdict"] = convergence_name(r.ends[e].verdict);
    d["method"] = r.ends[e].method;
    if (r.ends[e].method == "tail power-law extrapolation") {
      d["nu"] = r.ends[e].nu;
      d["nu_stderr"] = r.ends[e].nu_stderr;
    }
  }
  return j;
}

int cmd_conjugacy(Context& cx) {
  cx.load();
  nlohmann::ordered_json j;
  j["schema"] = "billiards-conjugacy/1";
  std::vector<std::pair<std::string, ConvexCurve>> curves;
  bool catalog = cx.cfg.flag("conjugacy", "catalog", false);
  if (catalog) {
    for (auto& e : conjugacy_catalog()) curves.emplace_back(e.name, build_curve(e.spec));
  } else {
    curves.emplace_back("curve", build_curve(curve_spec_from(cx.cfg, "curve")));
    curves.emplace_back("curve2", build_curve(curve_spec_from(cx.cfg, "curve2")));
  }
  std::vector<LazutkinLengthReport> reps;
  for (auto& [name, c] : curves) {
    reps.push_back(lazutkin_length(c));
    j["lengths"][name] = length_json(reps.back());
  }
  int code = 0;
  j["pairs"] = nlohmann::ordered_json::array();
  std::ostringstream table;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %-14s %-7s %-11s %-8s %s\n", "curve1", "curve2", "smooth", "symplectic",
                "trigger", "alpha");
  table << buf;
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      nlohmann::ordered_json p;
      p["curve1"] = curves[a].first;
      p["curve2"] = curves[b].first;
      try {
        ConjugacyVerdict v = classify_conjugacy(reps[a], reps[b]);
        p["smooth"] = v.smooth;
        p["symplectic"] = v.symplectic;
        p["trigger"] = trigger_name(v.trigger);
        p["reason"] = v.reason;
        if (v.trigger == Trigger::FiniteLengths) p["alpha"] = v.alpha;
        std::snprintf(buf, sizeof buf, "%-14s %-14s %-7s %-11s %-8s %s\n", curves[a].first.c_str(),
                      curves[b].first.c_str(), v.smooth ? "yes" : "no", v.symplectic ? "yes" : "no",
                      trigger_name(v.trigger),
                      v.trigger == Trigger::FiniteLengths ? std::to_string(v.alpha).c_str() : "-");
        table << buf;
        cx.report.verdict(curves[a].first + "|" + curves[b].first,
                          std::string(v.smooth ? "smooth" : "not smooth") + ", " +
                              (v.symplectic ? "symplectic" : "not symplectic"));
        if (!v.smooth) {
          if (!catalog) code = 4;
        } else if (!catalog) {
          BoundaryMap bm = boundary_conjugating_map(curves[a].second, curves[b].second, v);
          int n = cx.cfg.integer("conjugacy", "samples", 64);
          LazutkinChart l1(curves[a].second), l2(curves[b].second);
          Table t{{"s1", "s2", "t1", "t2"}, {}};
          std::vector<double> t1s, t2s;
          for (int i = 0; i <= n; ++i) {
            double s = curves[a].second.length() * i / n;
            double s2 = bm.map(s);
            t.rows.push_back({s, s2, l1.t(s), l2.t(s2)});
            t1s.push_back(l1.t(s));
            t2s.push_back(l2.t(s2));
          }
          cx.table("boundary_map", t);
          LineFit lf = linefit(t1s, t2s);
          double dev = 0.0;
          for (std::size_t i = 0; i < t1s.size(); ++i)
            dev = std::max(dev, std::fabs(t2s[i] - (lf.intercept + lf.slope * t1s[i])));
          cx.report.check("boundary_map_affine_deviation", dev, "<", 1e-6);
          cx.report.value("boundary_map_alpha", lf.slope);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InconclusiveInput) throw;
        p["inconclusive"] = true;
        cx.report.verdict(curves[a].first + "|" + curves[b].first, "inconclusive");
        std::snprintf(buf, sizeof buf, "%-14s %-14s inconclusive\n", curves[a].first.c_str(), curves[b].first.c_str());
        table << buf;
        if (!catalog) code = 3;
      }
      j["pairs"].push_back(p);
    }
  cx.write("conjugacy.json", j.dump(2) + "\n");
  cx.out << table.str();
  int base = cx.finish();
  return code != 0 ? code : base;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"curve", "orbit", "series", "foliate", "caustics", "conjugacy"};
  return names;
}

int run_command(const std::string& name, const GlobalOptions& opt, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<int(Context&)>> table = {
      {"curve", cmd_curve},     {"orbit", cmd_orbit},       {"series", cmd_series},
      {"foliate", cmd_foliate}, {"caustics", cmd_caustics}, {"conjugacy", cmd_conjugacy}};
  auto it = table.find(name);
  if (it == table.end()) {
    err << "unknown command '" << name << "'\n";
    return 2;
  }
  try {
    if (opt.format != "csv" && opt.format != "json") fail(ErrorCode::Validation, "--format must be csv or json");
    Context cx(name, opt, out);
    return it->second(cx);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace billiards
