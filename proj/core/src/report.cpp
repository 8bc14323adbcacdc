#include "billiards/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace billiards {

namespace {
nlohmann::ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}
}  // namespace

bool Report::check(const std::string& name, double value, const std::string& relation, double threshold) {
  bool ok = false;
  if (relation == "<") ok = value < threshold;
  else if (relation == "<=") ok = value <= threshold;
  else if (relation == ">") ok = value > threshold;
  else if (relation == ">=") ok = value >= threshold;
  checks_.push_back({name, value, threshold, relation, ok});
  return ok;
}

bool Report::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "billiards-report/1";
  j["command"] = command_;
  j["seed"] = seed_;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echo_) cfg[k] = v;
  auto& tol = j["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : tolerances_) tol[k] = num(v);
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks_)
    j["checks"].push_back({{"name", c.name}, {"value", num(c.value)}, {"relation", c.relation},
                           {"threshold", num(c.threshold)}, {"pass", c.pass}});
  auto& vals = j["values"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) vals[k] = num(v);
  auto& ver = j["verdicts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : verdicts_) ver[k] = v;
  j["artifacts"] = artifacts_;
  j["warnings"] = warnings_;
  return j.dump(2) + "\n";
}

std::string Report::summary() const {
  std::ostringstream o;
  char buf[512];
  for (const auto& c : checks_) {
    std::snprintf(buf, sizeof buf, "%-4s %-48s %.6g %s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                  c.relation.c_str(), c.threshold);
    o << buf;
  }
  for (const auto& [k, v] : verdicts_) o << "     " << k << ": " << v << "\n";
  for (const auto& w : warnings_) o << "warning: " << w << "\n";
  return o.str();
}

}  // namespace billiards
