#include "mdisc/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mdisc {

namespace {

constexpr double kDiscriminantTol = 1e-14;

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2 * a)};
  // Stable form avoids cancellation in the smaller root.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, c / q};
  std::sort(r.begin(), r.end());
  return r;
}

double polish(double a, double b, double c, double d, double x) {
  for (int it = 0; it < 8; ++it) {
    const double f = cubic_value(a, b, c, d, x);
    const double df = (3 * a * x + 2 * b) * x + c;
    if (df == 0.0) break;
    const double next = x - f / df;
    if (std::abs(cubic_value(a, b, c, d, next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

double bisect(double a, double b, double c, double d, double lo, double hi) {
  double flo = cubic_value(a, b, c, d, lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = cubic_value(a, b, c, d, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Brackets roots between the critical points; used when closed forms are
// ill-conditioned (near-multiple roots).
std::vector<double> bracketed_roots(double a, double b, double c, double d) {
  const double bound = 1.0 + std::max({std::abs(b / a), std::abs(c / a), std::abs(d / a)});
  std::vector<double> knots{-bound};
  for (double crit : quadratic_roots(3 * a, 2 * b, c)) {
    if (crit > -bound && crit < bound) knots.push_back(crit);
  }
  knots.push_back(bound);
  std::vector<double> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double f0 = cubic_value(a, b, c, d, knots[i]);
    const double f1 = cubic_value(a, b, c, d, knots[i + 1]);
    if ((f0 < 0) != (f1 < 0) && f0 != 0.0 && f1 != 0.0) {
      roots.push_back(bisect(a, b, c, d, knots[i], knots[i + 1]));
    }
  }
  // A double root touches zero at a critical point without a sign change.
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    if (std::abs(cubic_value(a, b, c, d, knots[i])) <= 1e-13 * scale) roots.push_back(knots[i]);
  }
  return roots;
}

}  // namespace

std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
  if (a == 0.0) return quadratic_roots(b, c, d);

  const double B = b / a;
  const double C = c / a;
  const double D = d / a;
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  const double shift = -B / 3.0;

  std::vector<double> roots;
  if (std::abs(disc) < kDiscriminantTol) {
    roots = bracketed_roots(a, b, c, d);
  } else if (disc > 0.0) {
    // p < 0 is implied by a positive discriminant.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(shift + m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
  } else {
    const double sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(shift + u + v);
  }

  for (double& r : roots) r = polish(a, b, c, d, r);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1 + std::abs(x)); }),
              roots.end());
  return roots;
}

}  // namespace mdisc
