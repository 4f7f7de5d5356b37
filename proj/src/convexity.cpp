#include "mdisc/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdisc/cubic.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/strategies.hpp"

namespace mdisc {

namespace {

void require_open_overlap(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    std::ostringstream msg;
    msg << "convexity analysis requires 0 < c < 1, got " << c;
    throw DomainError(msg.str());
  }
}

void require_convex_branch(double c, double p_inc) {
  require_open_overlap(c);
  if (!(p_inc >= 0.0 && p_inc < boundary_PIB(c))) {
    std::ostringstream msg;
    msg << "P_I = " << p_inc << " outside the q > 0 branch [0, " << boundary_PIB(c) << ")";
    throw DomainError(msg.str());
  }
}

bool on_q0_curve(double c, double p_inc) { return std::abs(1.0 - 2.0 * p_inc) < c; }

}  // namespace

std::string_view to_string(Branch b) { return b == Branch::Convex ? "convex" : "concave"; }

double success_from_y(double c, double y, double p_inc) {
  return 0.5 * (1.0 - p_inc) + std::sqrt(1.0 - c * c) / (2.0 * c) *
                                   std::sqrt(std::max(0.0, c * c - y * y)) * (1.0 - p_inc / (1.0 - y));
}

double y_root(double c, double p_inc) {
  require_convex_branch(c, p_inc);
  double best_y = 0.0;
  double best_ps = -1.0;
  bool found = false;
  for (double y : real_cubic_roots(1.0, -2.0, 1.0 - p_inc, p_inc * c * c)) {
    if (y < -c - 1e-12 || y > c + 1e-12) continue;
    y = std::clamp(y, -c, c);
    if (1.0 - 2.0 * p_inc / (1.0 - y) < -1e-12) continue;  // q < 0 is not a strategy
    const double ps = success_from_y(c, y, p_inc);
    if (!found || ps > best_ps + 1e-15 || (std::abs(ps - best_ps) <= 1e-15 && y > best_y)) {
      best_y = y;
      best_ps = ps;
      found = true;
    }
  }
  if (!found) throw DomainError("no admissible root of the y-cubic");
  return best_y;
}

DerivativeBundle second_derivative(double c, double p_inc) {
  DerivativeBundle d;
  d.y = y_root(c, p_inc);
  const double y = d.y;
  const double c2 = c * c;
  const double den = 3.0 * y * y - 4.0 * y + 1.0 - p_inc;
  if (std::abs(den) <= 1e-10) {
    std::ostringstream msg;
    msg << "y-cubic derivative vanishes (3y^2 - 4y + 1 - P_I = " << den << ") at c = " << c
        << ", P_I = " << p_inc << ", y = " << y;
    throw SingularityError(msg.str());
  }
  d.y_prime = (y - c2) / den;
  d.y_double_prime = 2.0 * (d.y_prime + d.y_prime * d.y_prime * (2.0 - 3.0 * y)) / den;

  const double r = std::sqrt(c2 - y * y);
  const double one_y = 1.0 - y;
  d.alpha = 2.0 * (y - c2) / (r * one_y * one_y);
  d.beta = (p_inc * (3.0 * c2 * y * y + c2 - 2.0 * c2 * c2 - 2.0 * y * y * y) - c2 * one_y * one_y * one_y) /
           (r * r * r * one_y * one_y * one_y);
  d.gamma = (y - c2) * p_inc / (r * one_y * one_y) - y / r;
  d.d2PS_dPI2 = std::sqrt(1.0 - c2) / (2.0 * c) *
                (d.alpha * d.y_prime + d.beta * d.y_prime * d.y_prime + d.gamma * d.y_double_prime);
  return d;
}

double concave_second_derivative(double c, double p_inc) {
  require_open_overlap(c);
  const double u = 1.0 - 2.0 * p_inc;
  const double bracket = c * c - u * u;
  if (!(bracket > 0.0)) {
    std::ostringstream msg;
    msg << "P_I = " << p_inc << " outside the q = 0 curve for c = " << c;
    throw DomainError(msg.str());
  }
  return -c * std::sqrt(1.0 - c * c) * std::pow(bracket, -1.5);
}

FiniteDifferenceCheck finite_difference_check(double c, double p_inc, double h, std::optional<Branch> branch) {
  require_open_overlap(c);
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const double p_b = boundary_PIB(c);
  const PairAngle pa = PairAngle::from_overlap(c);
  const Branch b = branch.value_or(p_inc < p_b ? Branch::Convex : Branch::Concave);

  FiniteDifferenceCheck out{};
  out.branch = b;
  if (b == Branch::Convex) {
    if (p_inc - h < 0.0 || p_inc + h >= p_b) {
      throw DomainError("finite-difference window crosses the branch boundary P_IB or P_I = 0");
    }
    auto ps = [&](double p) { return single_pure_curve(pa, p).point.p_success; };
    out.analytic = second_derivative(c, p_inc).d2PS_dPI2;
    out.numeric = (ps(p_inc + h) - 2.0 * ps(p_inc) + ps(p_inc - h)) / (h * h);
  } else {
    const bool window_ok = on_q0_curve(c, p_inc - h) && on_q0_curve(c, p_inc + h);
    if (!window_ok || (!branch && p_inc - h <= p_b)) {
      throw DomainError("finite-difference window crosses the branch boundary P_IB or the branch end");
    }
    auto ps = [&](double p) { return concave_branch(pa, p).p_success; };
    out.analytic = concave_second_derivative(c, p_inc);
    out.numeric = (ps(p_inc + h) - 2.0 * ps(p_inc) + ps(p_inc - h)) / (h * h);
  }
  out.rel_err = std::abs(out.analytic - out.numeric) / std::max(std::abs(out.analytic), 1e-12);
  return out;
}

}  // namespace mdisc
