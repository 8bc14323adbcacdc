#pragma once

// Lazutkin length, convergence verdicts for unbounded curves, and conjugacy classification.

#include <functional>
#include <string>
#include <vector>

#include "billiards/curve.hpp"

namespace billiards {

enum class Convergence { Convergent, Divergent, Inconclusive };
const char* convergence_name(Convergence c);

struct EndReport {
  Convergence verdict = Convergence::Convergent;
  double tail = 0.0;        ///< integral beyond the window (convergent ends)
  std::string method;       ///< "closed-window quadrature", "end-behavior rule ...", "tail power-law extrapolation"
  double nu = 0.0, nu_stderr = 0.0;  ///< tail exponent of the density in the curve parameter
  double r = 0.0;           ///< fitted power for y = x^r ends
};

struct LazutkinLengthReport {
  bool closed = false;
  double window = 0.0;      ///< integral over the working window
  EndReport ends[2];        ///< [0] backward (decreasing s), [1] forward
  bool finite() const;
  bool inconclusive() const;
  /// Total length; only meaningful when finite().
  double value() const;
};

/// Integral of kappa^{2/3} ds over the whole curve, end by end.
LazutkinLengthReport lazutkin_length(const ConvexCurve& curve);
/// Integral of kappa^{2/3} ds over [s_a, s_b] inside the working window.
double lazutkin_length_between(const ConvexCurve& curve, double s_a, double s_b);

enum class Trigger { None, FiniteLengths, InfiniteMatching };
const char* trigger_name(Trigger t);

struct ConjugacyVerdict {
  bool smooth = false;
  bool symplectic = false;
  Trigger trigger = Trigger::None;
  double alpha = 1.0, beta = 0.0;
  std::string reason;
};

/// Throws InconclusiveInput if either report is inconclusive.
ConjugacyVerdict classify_conjugacy(const LazutkinLengthReport& a, const LazutkinLengthReport& b,
                                    double equal_tol = 1e-8);
ConjugacyVerdict classify_conjugacy(const ConvexCurve& a, const ConvexCurve& b);

struct BoundaryMap {
  double alpha = 1.0, beta = 0.0;
  std::function<double(double)> map;  ///< s on curve 1 -> s on curve 2
};

/// H1 = t_L2^{-1}(alpha t_L1 + beta) with both Lazutkin parameters measured from the start of the window.
/// Throws VerdictNegative if the verdict is not smooth.
BoundaryMap boundary_conjugating_map(const ConvexCurve& a, const ConvexCurve& b, const ConjugacyVerdict& v);

struct CatalogEntry {
  std::string name;
  CurveSpec spec;
};
/// circle(1), circle(8), ellipse arc, parabola, x^3 graph on [1, inf), hyperbola branch with asymptotes.
std::vector<CatalogEntry> conjugacy_catalog();

}  // namespace billiards
