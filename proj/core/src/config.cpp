#include "billiards/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {
std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
}  // namespace

double parse_number(const std::string& raw, const std::string& what) {
  std::string s = lower(trim(raw));
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::Validation, what + ": expected a number, got '" + raw + "'");
  }
  if (pos != s.size()) fail(ErrorCode::Validation, what + ": trailing characters in '" + raw + "'");
  return v;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section = "global";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::Validation, origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(ErrorCode::Validation, origin + ":" + std::to_string(lineno) + ": empty section name");
      c.data_[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Validation, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorCode::Validation, origin + ":" + std::to_string(lineno) + ": empty key");
    if (c.data_[section].count(key))
      fail(ErrorCode::Validation, origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + section + "]");
    c.data_[section][key] = val;
    c.order_.emplace_back(section + "." + key, val);
  }
  return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) > 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end()) return std::nullopt;
  auto jt = it->second.find(key);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::string KeyValueConfig::str(const std::string& section, const std::string& key, const std::string& def) const {
  auto v = get(section, key);
  return v ? *v : def;
}

double KeyValueConfig::num(const std::string& section, const std::string& key, double def) const {
  auto v = get(section, key);
  return v ? parse_number(*v, "[" + section + "] " + key) : def;
}

int KeyValueConfig::integer(const std::string& section, const std::string& key, int def) const {
  auto v = get(section, key);
  if (!v) return def;
  double d = parse_number(*v, "[" + section + "] " + key);
  if (d != std::floor(d) || std::fabs(d) > 1e9) fail(ErrorCode::Validation, "[" + section + "] " + key + ": expected an integer");
  return static_cast<int>(d);
}

bool KeyValueConfig::flag(const std::string& section, const std::string& key, bool def) const {
  auto v = get(section, key);
  if (!v) return def;
  std::string s = lower(*v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  fail(ErrorCode::Validation, "[" + section + "] " + key + ": expected true or false");
}

std::vector<double> KeyValueConfig::list(const std::string& section, const std::string& key,
                                         const std::vector<double>& def) const {
  auto v = get(section, key);
  if (!v) return def;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "[" + section + "] " + key));
  if (out.empty()) fail(ErrorCode::Validation, "[" + section + "] " + key + ": empty list");
  return out;
}

void KeyValueConfig::require_known(const std::map<std::string, std::vector<std::string>>& allowed) const {
  for (const auto& [sec, kv] : data_) {
    auto it = allowed.find(sec);
    if (it == allowed.end()) fail(ErrorCode::Validation, origin_ + ": unknown section [" + sec + "]");
    for (const auto& [k, v] : kv)
      if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        fail(ErrorCode::Validation, origin_ + ": unknown key '" + k + "' in [" + sec + "]");
  }
}

std::vector<std::pair<std::string, std::string>> KeyValueConfig::entries() const { return order_; }

CurveSpec curve_spec_from(const KeyValueConfig& cfg, const std::string& sec) {
  if (!cfg.has_section(sec)) fail(ErrorCode::Validation, "missing [" + sec + "] section");
  std::string kind = lower(cfg.str(sec, "kind", ""));
  CurveSpec s;
  auto positive = [&](const char* key, double def) {
    double v = cfg.num(sec, key, def);
    if (!(v > 0.0 && std::isfinite(v))) fail(ErrorCode::Validation, "[" + sec + "] " + key + " must be a positive number");
    return v;
  };
  if (kind == "circle") {
    s = CurveSpec::circle(positive("radius", 1.0));
  } else if (kind == "ellipse") {
    s = CurveSpec::ellipse(positive("a", 2.0), positive("b", 1.0));
  } else if (kind == "ellipse_arc") {
    positive("a", 2.0);
    positive("b", 1.0);
    s = CurveSpec::ellipse_arc(cfg.num(sec, "a", 2.0), cfg.num(sec, "b", 1.0), cfg.num(sec, "t0", -1.0),
                               cfg.num(sec, "t1", 1.0));
  } else if (kind == "graph") {
    if (!cfg.has(sec, "f")) fail(ErrorCode::Validation, "[" + sec + "] graph curves need f = <expression in x>");
    s = CurveSpec::graph(cfg.str(sec, "f", ""), cfg.num(sec, "x0", 0.0), cfg.num(sec, "x1", 1.0));
    s.window_min = cfg.num(sec, "window_min", std::isfinite(s.x_min) ? s.x_min : -10.0);
    s.window_max = cfg.num(sec, "window_max", std::isfinite(s.x_max) ? s.x_max : 10.0);
  } else if (kind == "points") {
    std::string path = cfg.str(sec, "file", "");
    std::ifstream f(path);
    if (!f) fail(ErrorCode::Io, "[" + sec + "] cannot read points file '" + path + "'");
    std::vector<Vec2> pts;
    std::string line;
    while (std::getline(f, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) fail(ErrorCode::Validation, "points file rows must be 'x,y'");
      pts.push_back({parse_number(line.substr(0, comma), "x"), parse_number(line.substr(comma + 1), "y")});
    }
    s = CurveSpec::sampled(std::move(pts), cfg.flag(sec, "closed", true));
  } else {
    fail(ErrorCode::Validation, "[" + sec + "] kind must be circle, ellipse, ellipse_arc, graph or points");
  }
  s.resolution = cfg.integer(sec, "resolution", s.resolution);
  if (s.resolution < 64 || s.resolution > 1 << 20) fail(ErrorCode::Validation, "[" + sec + "] resolution must lie in [64, 1048576]");
  for (int e = 0; e < 2; ++e) {
    std::string key = e == 0 ? "end_begin" : "end_end";
    if (!cfg.has(sec, key)) continue;
    std::string v = lower(cfg.str(sec, key, ""));
    if (v == "finite") s.end_override[e] = EndKind::FiniteEndpoint;
    else if (v == "asymptotic_line") s.end_override[e] = EndKind::AsymptoticLine;
    else if (v == "unbounded") s.end_override[e] = EndKind::UnboundedNoAsymptote;
    else fail(ErrorCode::Validation, "[" + sec + "] " + key + " must be finite, asymptotic_line or unbounded");
  }
  return s;
}

Tolerances Tolerances::profile(const std::string& name) {
  Tolerances t;
  if (name == "default") return t;
  if (name == "strict") {
    t.det_defect = 1e-8;
    t.chart_det = 1e-4;
    t.slope_margin = 0.8;
    t.tangency_scale = 1e-6;
    t.symmetry_rad = 1e-7;
    t.envelope_scale = 1e-8;
    t.conic_residual = 1e-5;
    t.lambda_spread = 1e-9;
    t.circle_defect = 1e-10;
    return t;
  }
  fail(ErrorCode::Validation, "tolerance profile must be 'strict' or 'default'");
}

}  // namespace billiards
