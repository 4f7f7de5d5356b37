#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mdisc {

/// (P_S, P_E, P_I) with P_S + P_E + P_I = 1.
struct StrategyPoint {
  double p_success = 0.0;
  double p_error = 0.0;
  double p_inconclusive = 0.0;

  /// Builds the point from P_S and P_I; P_E absorbs the remainder, with
  /// rounding-level negatives (>= -1e-12) snapped to zero.
  static StrategyPoint from_success_inconclusive(double p_success, double p_inconclusive);
  double sum() const { return p_success + p_error + p_inconclusive; }
};

/// cos 2theta and sin 2theta of a measurement pair; the single-qubit formulas
/// only depend on these.
struct PairAngle {
  double c;  ///< overlap cos 2theta, in [0, 1]
  double s;  ///< sin 2theta = sqrt(1 - c^2)

  static PairAngle from_theta(double theta);
  static PairAngle from_overlap(double c);
  double theta() const;
};

/// One pure single-qubit probe cos(t)|0> + sin(t)|1> with guess rule q.
struct ProbeSetting {
  double probe_angle;  ///< t in [0, pi/2]
  double x;            ///< cos 2t
  double q;            ///< probability of guessing N (instead of inconclusive) on outcome 1

  static ProbeSetting from_x(double x, double q);
};

struct WeightedProbe {
  double weight;
  ProbeSetting setting;
};

/// A single-qubit strategy: one pure probe, or a convex mixture of two.
struct SingleQubitStrategy {
  std::vector<WeightedProbe> components;

  static SingleQubitStrategy pure(const ProbeSetting& s) { return {{{1.0, s}}}; }
  bool is_mixture() const { return components.size() > 1; }
  std::string describe() const;
};

struct SingleQubitResult {
  StrategyPoint point;
  SingleQubitStrategy strategy;
};

// --- entangled probe -------------------------------------------------------

/// Optimal success with the singlet probe; P_I must lie in [0, cos 2theta].
StrategyPoint entangled_success(double theta, double p_inc);

/// entangled_success extended past the error-free point by discarding
/// conclusive outcomes: P_S = 1 - P_I for P_I in (cos 2theta, 1].
StrategyPoint entangled_envelope(double theta, double p_inc);

/// P_S / (1 - P_I). Throws DomainError when P_I = 1.
double relative_success(const StrategyPoint& point);

/// Minimum-error point (P_I = 0).
StrategyPoint helstrom_point(double theta);

// --- single-qubit probes ---------------------------------------------------

/// Boundary of the q > 0 regime: (3 + sqrt(1 + 8c^2)) / 8.
double boundary_PIB(double c);

/// Inconclusive rate of the hull tangency point T. Throws for c = 0.
double tangent_PIT(double c);

/// Success probability of a pure probe at fixed P_I with q eliminated:
/// 1/2 (1 - P_I) + 1/2 s sqrt(1 - x^2) (1 - P_I / (1 - x c)).
double pure_success_at(const PairAngle& pa, double x, double p_inc);

/// Residual of c^2 x^3 - 2c x^2 + (1 - P_I) x + P_I c.
double stationarity_cubic(double c, double x, double p_inc);

/// (P_S, P_E, P_I) of a pure probe angle and guess probability q.
StrategyPoint single_probe_point(const PairAngle& pa, double probe_angle, double q);

/// Best pure probe at fixed P_I in [0, (1 + c^2)/2].
SingleQubitResult single_pure_curve(const PairAngle& pa, double p_inc);
SingleQubitResult single_pure_curve(double theta, double p_inc);

/// q = 0 branch; requires |1 - 2 P_I| <= c.
StrategyPoint concave_branch(const PairAngle& pa, double p_inc);
StrategyPoint concave_branch(double theta, double p_inc);

/// Optimal single-qubit strategy (upper convex hull of pure strategies).
SingleQubitResult single_optimal(const PairAngle& pa, double p_inc);
SingleQubitResult single_optimal(double theta, double p_inc);

/// single_optimal extended past the unambiguous end point U by mixing U with
/// the always-inconclusive strategy: P_S = 1 - P_I on ((1 + c^2)/2, 1].
StrategyPoint single_envelope(double theta, double p_inc);

struct UnambiguousPoints {
  StrategyPoint entangled;
  StrategyPoint single;
};
UnambiguousPoints unambiguous_points(double theta);

/// entangled_envelope - single_envelope at equal P_I, for P_I in [0, 1].
double advantage(double theta, double p_inc);

/// Outcome/measurement relabeling that brings a probe's statistics into the
/// canonical order P_M0/P_N0 >= P_N1/P_M1 >= 1.
struct Relabeling {
  bool swap_measurements = false;
  bool swap_outcomes = false;
  double p_m0 = 0.0;  ///< P(outcome 0 | M) after relabeling
  double p_n0 = 0.0;  ///< P(outcome 0 | N) after relabeling
};

/// Identity is preferred on ties, then outcome swap, measurement swap, both.
Relabeling canonicalize_probe(double p_m0, double p_n0);

// --- tables ----------------------------------------------------------------

struct CurveRow {
  double p_inc;
  double ps_entangled;
  double ps_single_optimal;
  double ps_single_pure;  ///< NaN outside the pure-curve domain
  double pts_entangled;
  double pts_single;
  double advantage;
  std::string strategy;  ///< descriptor of the optimal single-qubit strategy
};

/// Theory curves over a P_I grid; P_I must be strictly increasing and lie in [0, 1].
struct CurveTable {
  double theta;
  std::vector<CurveRow> rows;
};

CurveTable curve_table(double theta, const std::vector<double>& p_inc_grid);

/// start, start+step, ..., stop with both endpoints exact. step may be
/// negative; a zero-length range yields {start}.
std::vector<double> inclusive_grid(double start, double stop, double step);

}  // namespace mdisc
