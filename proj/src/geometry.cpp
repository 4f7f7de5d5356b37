#include "mdisc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mdisc/errors.hpp"

namespace mdisc {

namespace {

// Slack for inputs that sit on a domain endpoint up to rounding.
constexpr double kEdgeSlack = 1e-14;

}  // namespace

PureQubitState::PureQubitState(const Vec2& amplitudes) : amp_(amplitudes) {
  if (std::abs(amp_.squaredNorm() - 1.0) > kExactTol) {
    std::ostringstream msg;
    msg << "state is not normalized (|amp|^2 = " << amp_.squaredNorm() << ")";
    throw ValidationError(msg.str());
  }
}

PureQubitState PureQubitState::plus() { return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}; }
PureQubitState PureQubitState::minus() { return {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2}; }
PureQubitState PureQubitState::at_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

bool PureQubitState::same_ray(const PureQubitState& other, double tol) const {
  return (projector() - other.projector()).cwiseAbs().maxCoeff() <= tol;
}

double MeasurementPair::c() const { return std::cos(2.0 * theta); }
double MeasurementPair::s() const { return std::sin(2.0 * theta); }

MeasurementPair measurement_pair(double theta) {
  if (!(theta >= -kEdgeSlack && theta <= std::numbers::pi / 4 + kEdgeSlack)) {
    std::ostringstream msg;
    msg << "theta outside [0, pi/4]: " << theta;
    throw DomainError(msg.str());
  }
  theta = std::clamp(theta, 0.0, std::numbers::pi / 4);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  MeasurementPair p{theta,
                    PureQubitState(ct, st),
                    PureQubitState(st, -ct),
                    PureQubitState(ct, -st),
                    PureQubitState(st, ct),
                    {}, {}, {}, {}};
  p.M0 = p.phi.projector();
  p.M1 = p.phi_perp.projector();
  p.N0 = p.psi.projector();
  p.N1 = p.psi_perp.projector();
  return p;
}

double overlap(const MeasurementPair& pair) { return std::abs(pair.psi.inner(pair.phi)); }

Mat2 sigma_y() {
  Mat2 s;
  s << 0.0, 1.0, -1.0, 0.0;
  return s;
}

PureQubitState apply_sigma_y(const PureQubitState& state) {
  return PureQubitState(Vec2(state[1], -state[0]));
}

FilterOperator::FilterOperator(double f) : f_(f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    std::ostringstream msg;
    msg << "filter attenuation must lie in [0, 1], got " << f;
    throw DomainError(msg.str());
  }
}

Mat2 FilterOperator::matrix() const {
  Mat2 m;
  m << f_, 0.0, 0.0, 1.0;
  return m;
}

FilterOperator filter_for_budget(double theta, double p_inc) {
  const MeasurementPair pair = measurement_pair(theta);
  const double c = pair.c();
  if (p_inc < -kEdgeSlack) throw DomainError("negative inconclusive budget");
  if (p_inc > c + kEdgeSlack) {
    std::ostringstream msg;
    msg << "budget exceeds IDP point: P_I = " << p_inc << " > cos 2theta = " << c;
    throw DomainError(msg.str());
  }
  p_inc = std::clamp(p_inc, 0.0, std::max(c, 0.0));
  const double ct = std::cos(pair.theta);
  return FilterOperator(std::sqrt(std::max(0.0, 1.0 - p_inc / (ct * ct))));
}

FilterResult apply_filter(const FilterOperator& filter, const PureQubitState& state) {
  const Vec2 out = filter.matrix() * state.amplitudes();
  const double norm2 = out.squaredNorm();
  if (norm2 <= 0.0) return {std::nullopt, 0.0};
  return {PureQubitState(out / std::sqrt(norm2)), norm2};
}

}  // namespace mdisc
