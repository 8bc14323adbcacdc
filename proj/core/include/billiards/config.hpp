#pragma once

// Flat key = value configuration with [section] headers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "billiards/curve.hpp"

namespace billiards {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string str(const std::string& section, const std::string& key, const std::string& def) const;
  double num(const std::string& section, const std::string& key, double def) const;
  int integer(const std::string& section, const std::string& key, int def) const;
  bool flag(const std::string& section, const std::string& key, bool def) const;
  std::vector<double> list(const std::string& section, const std::string& key, const std::vector<double>& def) const;
  bool has_section(const std::string& section) const { return data_.count(section) > 0; }

  /// Throws Validation naming the first key not in the allowed set of its section.
  void require_known(const std::map<std::string, std::vector<std::string>>& allowed) const;
  /// Entries in file order, "section.key=value" per line (used for the report echo).
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::vector<std::pair<std::string, std::string>> order_;
  std::string origin_;
};

/// Reads a curve specification from a section (kind, radius, a, b, t0, t1, f, x0, x1, ...).
CurveSpec curve_spec_from(const KeyValueConfig& cfg, const std::string& section);

/// Parses a number allowing "inf" and "-inf".
double parse_number(const std::string& s, const std::string& what);

struct Tolerances {
  double det_defect = 1e-6;        ///< billiard step Jacobian
  double chart_det = 1e-3;         ///< normal chart Jacobian
  double slope_margin = 0.7;       ///< series defect slope >= N + margin
  double tangency_scale = 1e-5;    ///< orbit drift relative to curve size
  double symmetry_rad = 1e-6;      ///< reflection symmetry of tangent lines
  double envelope_scale = 1e-7;    ///< envelope residuals relative to curve size
  double conic_residual = 1e-4;    ///< confocal fit
  double lambda_spread = 1e-8;     ///< conserved quantity along ellipse orbits
  double circle_defect = 1e-8;     ///< circle foliation
  static Tolerances profile(const std::string& name);
};

}  // namespace billiards
