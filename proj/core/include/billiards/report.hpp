#pragma once

// Run report: command echo, measured checks with thresholds, verdicts, artifacts.

#include <string>
#include <utility>
#include <vector>

namespace billiards {

struct Check {
  std::string name;
  double value;
  double threshold;
  std::string relation;  ///< "<", "<=", ">=", ">"
  bool pass;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void echo(const std::vector<std::pair<std::string, std::string>>& entries) { echo_ = entries; }
  void tolerance(const std::string& name, double value) { tolerances_.emplace_back(name, value); }
  /// Records value against threshold; returns the outcome.
  bool check(const std::string& name, double value, const std::string& relation, double threshold);
  void value(const std::string& name, double v) { values_.emplace_back(name, v); }
  void verdict(const std::string& name, const std::string& v) { verdicts_.emplace_back(name, v); }
  void artifact(const std::string& path) { artifacts_.push_back(path); }
  void warn(const std::string& w) { warnings_.push_back(w); }
  void seed(unsigned long long s) { seed_ = s; }

  bool all_pass() const;
  const std::vector<Check>& checks() const { return checks_; }
  std::string to_json() const;
  /// One line per check and verdict.
  std::string summary() const;

 private:
  std::string command_;
  unsigned long long seed_ = 0;
  std::vector<std::pair<std::string, std::string>> echo_, verdicts_;
  std::vector<std::pair<std::string, double>> tolerances_, values_;
  std::vector<Check> checks_;
  std::vector<std::string> artifacts_, warnings_;
};

}  // namespace billiards
