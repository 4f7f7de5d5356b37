#pragma once

#include <optional>
#include <string_view>

namespace mdisc {

/// Second derivative of the optimal pure-probe P_S(P_I) on the q > 0 branch,
/// with the intermediate quantities of its closed form.
struct DerivativeBundle {
  double y = 0.0;  ///< y = c x, root of y^3 - 2y^2 + (1 - P_I) y + P_I c^2
  double y_prime = 0.0;
  double y_double_prime = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double d2PS_dPI2 = 0.0;
};

/// Root y of the y-cubic in [-c, c] maximizing the y-form of P_S.
/// Requires 0 < c < 1 and 0 <= P_I < P_IB.
double y_root(double c, double p_inc);

/// P_S in the y parameterization:
/// 1/2 (1 - P_I) + sqrt(1 - c^2)/(2c) sqrt(c^2 - y^2) (1 - P_I/(1 - y)).
double success_from_y(double c, double y, double p_inc);

/// Throws SingularityError when 3y^2 - 4y + 1 - P_I is within 1e-10 of zero.
DerivativeBundle second_derivative(double c, double p_inc);

/// -c sqrt(1 - c^2) [c^2 - (1 - 2P_I)^2]^(-3/2): curvature of the q = 0
/// curve, which is the optimal pure-probe curve for P_I > P_IB.
/// Requires |1 - 2P_I| < c.
double concave_second_derivative(double c, double p_inc);

enum class Branch { Convex, Concave };
std::string_view to_string(Branch b);

struct FiniteDifferenceCheck {
  Branch branch;
  double analytic;
  double numeric;
  double rel_err;  ///< |analytic - numeric| / max(|analytic|, 1e-12)
};

inline constexpr double kSecondDerivativeStep = 1e-4;
inline constexpr double kFirstDerivativeStep = 1e-5;

/// Central second difference of the branch P_S against the closed form. The
/// branch follows from P_IB unless given; a forced concave branch evaluates
/// the q = 0 curve anywhere in its domain. Throws DomainError if the window
/// [P_I - h, P_I + h] straddles P_IB (automatic branch) or leaves the domain.
FiniteDifferenceCheck finite_difference_check(double c, double p_inc,
                                              double h = kSecondDerivativeStep,
                                              std::optional<Branch> branch = std::nullopt);

}  // namespace mdisc
