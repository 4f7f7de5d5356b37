#include "mdisc/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mdisc/cubic.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/geometry.hpp"

namespace mdisc {

namespace {

constexpr double kEdgeSlack = 1e-14;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_budget(double p_inc, double hi, const char* what) {
  if (!(p_inc >= -kEdgeSlack && p_inc <= hi + kEdgeSlack)) {
    std::ostringstream msg;
    msg << what << ": P_I = " << p_inc << " outside [0, " << hi << "]";
    throw DomainError(msg.str());
  }
  return std::clamp(p_inc, 0.0, hi);
}

double unambiguous_budget(double c) { return 0.5 * (1.0 + c * c); }

}  // namespace

StrategyPoint StrategyPoint::from_success_inconclusive(double p_success, double p_inconclusive) {
  double p_error = 1.0 - p_success - p_inconclusive;
  if (p_error < 0.0 && p_error >= -kExactTol) p_error = 0.0;
  return {p_success, p_error, p_inconclusive};
}

PairAngle PairAngle::from_theta(double theta) {
  const MeasurementPair pair = measurement_pair(theta);
  return {std::max(0.0, pair.c()), pair.s()};
}

PairAngle PairAngle::from_overlap(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    std::ostringstream msg;
    msg << "overlap c = " << c << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return {c, std::sqrt(1.0 - c * c)};
}

double PairAngle::theta() const { return 0.5 * std::acos(c); }

ProbeSetting ProbeSetting::from_x(double x, double q) {
  x = std::clamp(x, -1.0, 1.0);
  return {0.5 * std::acos(x), x, q};
}

std::string SingleQubitStrategy::describe() const {
  std::ostringstream out;
  out.precision(6);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& [w, s] = components[i];
    if (i) out << '+';
    if (is_mixture()) out << w << '*';
    out << "probe(x=" << s.x << ",q=" << s.q << ')';
  }
  return out.str();
}

// --- entangled probe -------------------------------------------------------

StrategyPoint entangled_success(double theta, double p_inc) {
  const MeasurementPair pair = measurement_pair(theta);
  const double c = std::max(0.0, pair.c());
  p_inc = clamp_budget(p_inc, c, "entangled curve");
  const double cos_t = std::cos(pair.theta);
  const double f2 = std::max(0.0, 1.0 - p_inc / (cos_t * cos_t));
  const double ps = 0.5 * (1.0 - p_inc + pair.s() * std::sqrt(f2));
  return StrategyPoint::from_success_inconclusive(ps, p_inc);
}

StrategyPoint entangled_envelope(double theta, double p_inc) {
  const double c = std::max(0.0, measurement_pair(theta).c());
  if (p_inc > c + kEdgeSlack) {
    p_inc = clamp_budget(p_inc, 1.0, "entangled envelope");
    return {1.0 - p_inc, 0.0, p_inc};
  }
  return entangled_success(theta, p_inc);
}

double relative_success(const StrategyPoint& point) {
  if (point.p_inconclusive >= 1.0) throw DomainError("relative success undefined at P_I = 1");
  return point.p_success / (1.0 - point.p_inconclusive);
}

StrategyPoint helstrom_point(double theta) {
  const MeasurementPair pair = measurement_pair(theta);
  return StrategyPoint::from_success_inconclusive(0.5 * (1.0 + pair.s()), 0.0);
}

// --- single-qubit probes ---------------------------------------------------

double boundary_PIB(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("boundary_PIB requires c in [0, 1]");
  return (3.0 + std::sqrt(1.0 + 8.0 * c * c)) / 8.0;
}

double tangent_PIT(double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw DomainError("tangent point undefined for c = 0: the hull degenerates");
  }
  const double c2 = c * c;
  return (1.0 + 3.0 * c2 + 2.0 * c2 * std::sqrt(1.0 + 3.0 * c2)) / (2.0 * (1.0 + 4.0 * c2));
}

double pure_success_at(const PairAngle& pa, double x, double p_inc) {
  return 0.5 * (1.0 - p_inc) +
         0.5 * pa.s * std::sqrt(std::max(0.0, 1.0 - x * x)) * (1.0 - p_inc / (1.0 - x * pa.c));
}

double stationarity_cubic(double c, double x, double p_inc) {
  return cubic_value(c * c, -2.0 * c, 1.0 - p_inc, p_inc * c, x);
}

StrategyPoint single_probe_point(const PairAngle& pa, double probe_angle, double q) {
  const double x = std::cos(2.0 * probe_angle);
  const double sin2 = std::sin(2.0 * probe_angle);
  // sin^2(theta + t) = (1 - c x + s sin 2t) / 2
  const double overlap_n1 = 0.5 * (1.0 - pa.c * x + pa.s * sin2);
  const double ps = 0.5 * (1.0 + pa.s * sin2 - (1.0 - q) * overlap_n1);
  const double pi = 0.5 * (1.0 - q) * (1.0 - pa.c * x);
  return StrategyPoint::from_success_inconclusive(ps, pi);
}

StrategyPoint concave_branch(const PairAngle& pa, double p_inc) {
  const double u = 1.0 - 2.0 * p_inc;
  if (!(std::abs(u) <= pa.c + kEdgeSlack)) {
    std::ostringstream msg;
    msg << "concave branch requires |1 - 2 P_I| <= c (P_I = " << p_inc << ", c = " << pa.c << ")";
    throw DomainError(msg.str());
  }
  // c = 0 admits only P_I = 1/2, where the ratio u/c is taken as 0.
  const double ratio = pa.c > 0.0 ? u / pa.c : 0.0;
  const double ps = 0.5 * (1.0 - p_inc) + 0.25 * pa.s * std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  return StrategyPoint::from_success_inconclusive(ps, p_inc);
}

StrategyPoint concave_branch(double theta, double p_inc) {
  return concave_branch(PairAngle::from_theta(theta), p_inc);
}

SingleQubitResult single_pure_curve(const PairAngle& pa, double p_inc) {
  const double c = pa.c;
  p_inc = clamp_budget(p_inc, unambiguous_budget(c), "single-qubit curve");

  if (c == 0.0) {
    const double q = 1.0 - 2.0 * p_inc;
    return {StrategyPoint::from_success_inconclusive(1.0 - p_inc, p_inc),
            SingleQubitStrategy::pure({std::numbers::pi / 4, 0.0, q})};
  }

  if (p_inc < boundary_PIB(c)) {
    double best_x = 0.0;
    double best_ps = -1.0;
    bool found = false;
    for (double x : real_cubic_roots(c * c, -2.0 * c, 1.0 - p_inc, p_inc * c)) {
      if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12) continue;
      x = std::clamp(x, -1.0, 1.0);
      const double denom = 1.0 - x * c;
      if (denom <= 1e-15) continue;
      const double q = 1.0 - 2.0 * p_inc / denom;
      if (q < -1e-12 || q > 1.0 + 1e-12) continue;
      const double ps = pure_success_at(pa, x, p_inc);
      // Ties (multiple maxima) resolve toward the larger root.
      if (!found || ps > best_ps + 1e-15 || (std::abs(ps - best_ps) <= 1e-15 && x > best_x)) {
        best_x = x;
        best_ps = ps;
        found = true;
      }
    }
    if (found) {
      const double q = std::clamp(1.0 - 2.0 * p_inc / (1.0 - best_x * c), 0.0, 1.0);
      return {StrategyPoint::from_success_inconclusive(best_ps, p_inc),
              SingleQubitStrategy::pure(ProbeSetting::from_x(best_x, q))};
    }
    // No feasible stationary point: only reachable within rounding of P_IB.
  }

  const double x = std::clamp((1.0 - 2.0 * p_inc) / c, -1.0, 1.0);
  return {concave_branch(pa, p_inc), SingleQubitStrategy::pure(ProbeSetting::from_x(x, 0.0))};
}

SingleQubitResult single_pure_curve(double theta, double p_inc) {
  return single_pure_curve(PairAngle::from_theta(theta), p_inc);
}

SingleQubitResult single_optimal(const PairAngle& pa, double p_inc) {
  const double c = pa.c;
  p_inc = clamp_budget(p_inc, unambiguous_budget(c), "single-qubit optimum");
  if (c == 0.0) return single_pure_curve(pa, p_inc);

  const double p_t = tangent_PIT(c);
  if (p_inc >= p_t) {
    const double x = std::clamp((1.0 - 2.0 * p_inc) / c, -1.0, 1.0);
    return {concave_branch(pa, p_inc), SingleQubitStrategy::pure(ProbeSetting::from_x(x, 0.0))};
  }

  const double w_t = p_inc / p_t;
  const double ps_a = 0.5 * (1.0 + pa.s);
  const double ps_t = concave_branch(pa, p_t).p_success;
  const double ps = (1.0 - w_t) * ps_a + w_t * ps_t;
  SingleQubitStrategy mix{{{1.0 - w_t, {std::numbers::pi / 4, 0.0, 1.0}},
                           {w_t, ProbeSetting::from_x((1.0 - 2.0 * p_t) / c, 0.0)}}};
  return {StrategyPoint::from_success_inconclusive(ps, p_inc), std::move(mix)};
}

SingleQubitResult single_optimal(double theta, double p_inc) {
  return single_optimal(PairAngle::from_theta(theta), p_inc);
}

StrategyPoint single_envelope(double theta, double p_inc) {
  const PairAngle pa = PairAngle::from_theta(theta);
  if (p_inc > unambiguous_budget(pa.c) + kEdgeSlack) {
    p_inc = clamp_budget(p_inc, 1.0, "single-qubit envelope");
    return {1.0 - p_inc, 0.0, p_inc};
  }
  return single_optimal(pa, p_inc).point;
}

UnambiguousPoints unambiguous_points(double theta) {
  const MeasurementPair pair = measurement_pair(theta);
  const double c = std::max(0.0, pair.c());
  const double st = std::sin(pair.theta);
  return {StrategyPoint::from_success_inconclusive(2.0 * st * st, c),
          StrategyPoint::from_success_inconclusive(0.5 * (1.0 - c * c), unambiguous_budget(c))};
}

double advantage(double theta, double p_inc) {
  return entangled_envelope(theta, p_inc).p_success - single_envelope(theta, p_inc).p_success;
}

Relabeling canonicalize_probe(double p_m0, double p_n0) {
  const Relabeling candidates[] = {
      {false, false, p_m0, p_n0},
      {false, true, 1.0 - p_m0, 1.0 - p_n0},
      {true, false, p_n0, p_m0},
      {true, true, 1.0 - p_n0, 1.0 - p_m0},
  };
  // P_M0/P_N0 >= P_N1/P_M1 >= 1  <=>  P_M0 >= P_N0 and P_M0 + P_N0 <= 1.
  for (const auto& r : candidates) {
    if (r.p_m0 >= r.p_n0 && r.p_m0 + r.p_n0 <= 1.0) return r;
  }
  // Rounding can leave every candidate a hair outside; pick the closest.
  return candidates[p_m0 + p_n0 <= 1.0 ? 2 : 3];
}

// --- tables ----------------------------------------------------------------

std::vector<double> inclusive_grid(double start, double stop, double step) {
  if (start == stop) return {start};
  if (step == 0.0 || (stop - start) / step < 0.0) {
    throw DomainError("grid step must be nonzero and point from start to stop");
  }
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long k = 0; k <= n; ++k) grid.push_back(start + static_cast<double>(k) * step);
  if (std::abs(grid.back() - stop) <= 1e-9 * std::max(1.0, std::abs(step))) {
    grid.back() = stop;
  } else {
    grid.push_back(stop);
  }
  return grid;
}

CurveTable curve_table(double theta, const std::vector<double>& p_inc_grid) {
  const PairAngle pa = PairAngle::from_theta(theta);
  CurveTable table{theta, {}};
  table.rows.reserve(p_inc_grid.size());
  for (std::size_t i = 0; i < p_inc_grid.size(); ++i) {
    const double p = p_inc_grid[i];
    if (i > 0 && !(p > p_inc_grid[i - 1])) throw DomainError("P_I grid must be strictly increasing");
    const StrategyPoint ent = entangled_envelope(theta, p);
    const StrategyPoint single = single_envelope(theta, p);
    double ps_pure = kNaN;
    std::string strategy = "inconclusive-mixture";
    if (p <= unambiguous_budget(pa.c) + kEdgeSlack) {
      ps_pure = single_pure_curve(pa, p).point.p_success;
      strategy = single_optimal(pa, p).strategy.describe();
    }
    const double rel_e = p < 1.0 ? relative_success(ent) : kNaN;
    const double rel_s = p < 1.0 ? relative_success(single) : kNaN;
    table.rows.push_back({p, ent.p_success, single.p_success, ps_pure, rel_e, rel_s,
                          ent.p_success - single.p_success, std::move(strategy)});
  }
  return table;
}

}  // namespace mdisc
