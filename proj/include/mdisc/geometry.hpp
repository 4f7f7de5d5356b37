#pragma once

#include <optional>

#include <Eigen/Core>

namespace mdisc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Tolerance for exact-algebra identities.
inline constexpr double kExactTol = 1e-12;

/// Real single-qubit pure state, unit norm.
class PureQubitState {
 public:
  /// Normalizes nothing; throws ValidationError unless |amp| = 1 to 1e-12.
  explicit PureQubitState(const Vec2& amplitudes);
  PureQubitState(double a0, double a1) : PureQubitState(Vec2(a0, a1)) {}

  static PureQubitState zero() { return {1.0, 0.0}; }
  static PureQubitState one() { return {0.0, 1.0}; }
  static PureQubitState plus();
  static PureQubitState minus();
  /// cos(angle)|0> + sin(angle)|1>
  static PureQubitState at_angle(double angle);

  const Vec2& amplitudes() const noexcept { return amp_; }
  double operator[](int i) const noexcept { return amp_[i]; }
  Mat2 projector() const { return amp_ * amp_.transpose(); }
  double inner(const PureQubitState& other) const noexcept { return amp_.dot(other.amp_); }

  /// Equal up to global sign (projector comparison).
  bool same_ray(const PureQubitState& other, double tol = kExactTol) const;

 private:
  Vec2 amp_;
};

/// The two projective measurements, fixed by the half-angle theta in [0, pi/4].
struct MeasurementPair {
  double theta;
  PureQubitState phi, phi_perp, psi, psi_perp;
  Mat2 M0, M1, N0, N1;

  double c() const;  ///< cos 2theta
  double s() const;  ///< sin 2theta
};

/// Builds the pair; throws DomainError outside [0, pi/4].
MeasurementPair measurement_pair(double theta);

/// |<psi|phi>| = cos 2theta.
double overlap(const MeasurementPair& pair);

/// sigma_Y = |0><1| - |1><0|.
Mat2 sigma_y();
PureQubitState apply_sigma_y(const PureQubitState& state);

/// Filter diag(f, 1), 0 <= f <= 1.
class FilterOperator {
 public:
  explicit FilterOperator(double f);
  double f() const noexcept { return f_; }
  Mat2 matrix() const;

 private:
  double f_;
};

/// Filter reaching inconclusive rate p_inc on the pair's states.
/// Throws DomainError when p_inc lies outside [0, cos 2theta].
FilterOperator filter_for_budget(double theta, double p_inc);

struct FilterResult {
  std::optional<PureQubitState> state;  ///< empty when the filtered vector vanishes
  double success_prob;
};

FilterResult apply_filter(const FilterOperator& filter, const PureQubitState& state);

}  // namespace mdisc
