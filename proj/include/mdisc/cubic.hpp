#pragma once

#include <vector>

namespace mdisc {

/// Real roots of a*x^3 + b*x^2 + c*x + d = 0, ascending, each Newton-polished.
///
/// Closed form (trigonometric for three real roots, Cardano for one); when the
/// discriminant of the monic depressed cubic is below 1e-14 in magnitude the
/// roots are bracketed between critical points and bisected instead.
/// Degenerates to the quadratic/linear formula when a == 0.
std::vector<double> real_cubic_roots(double a, double b, double c, double d);

inline double cubic_value(double a, double b, double c, double d, double x) {
  return ((a * x + b) * x + c) * x + d;
}

}  // namespace mdisc
