#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mdisc/errors.hpp"
#include "mdisc/geometry.hpp"

using namespace mdisc;

TEST(PureQubitState, RejectsNonUnitAmplitudes) {
  EXPECT_THROW(PureQubitState(1.0, 1.0), ValidationError);
  EXPECT_NO_THROW(PureQubitState(0.6, 0.8));
}

TEST(PureQubitState, PlusMinusAreOrthogonal) {
  EXPECT_NEAR(PureQubitState::plus().inner(PureQubitState::minus()), 0.0, 1e-15);
  EXPECT_TRUE(PureQubitState::at_angle(std::numbers::pi / 4).same_ray(PureQubitState::plus()));
  EXPECT_TRUE(PureQubitState(-0.6, -0.8).same_ray(PureQubitState(0.6, 0.8)));
}

TEST(MeasurementPair, BasesAreOrthonormalAndOverlapIsCos2Theta) {
  for (int j = 0; j <= 20; ++j) {
    const double theta = j * std::numbers::pi / 80.0;
    const MeasurementPair p = measurement_pair(theta);
    EXPECT_NEAR(p.phi.inner(p.phi_perp), 0.0, 1e-15);
    EXPECT_NEAR(p.psi.inner(p.psi_perp), 0.0, 1e-15);
    EXPECT_NEAR(overlap(p), std::cos(2 * theta), 1e-15);
    EXPECT_NEAR((p.M0 + p.M1 - Mat2::Identity()).norm(), 0.0, 1e-15);
    EXPECT_NEAR((p.N0 + p.N1 - Mat2::Identity()).norm(), 0.0, 1e-15);
  }
}

TEST(MeasurementPair, ThetaOutsideRangeThrows) {
  EXPECT_THROW(measurement_pair(2.0), DomainError);
  EXPECT_THROW(measurement_pair(-0.1), DomainError);
  try {
    measurement_pair(2.0);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("theta outside [0, pi/4]"), std::string::npos);
  }
}

TEST(MeasurementPair, PiOverFourGivesUnbiasedBases) {
  const MeasurementPair p = measurement_pair(std::numbers::pi / 4);
  EXPECT_NEAR(overlap(p), 0.0, 1e-15);
}

TEST(SigmaY, MapsPhiOntoPsiPerp) {
  const MeasurementPair p = measurement_pair(0.3);
  EXPECT_TRUE(apply_sigma_y(p.phi).same_ray(p.phi_perp));
  EXPECT_TRUE(apply_sigma_y(p.psi).same_ray(p.psi_perp));
  const Mat2 s = sigma_y();
  EXPECT_NEAR((s * s.transpose() - Mat2::Identity()).norm(), 0.0, 0.0);
}

TEST(Filter, BudgetReachesRequestedInconclusiveRate) {
  const double theta = std::numbers::pi / 6;
  const FilterOperator f = filter_for_budget(theta, 0.3);
  EXPECT_NEAR(f.f(), std::sqrt(0.6), 1e-15);
  const MeasurementPair p = measurement_pair(theta);
  const FilterResult r = apply_filter(f, p.phi);
  EXPECT_NEAR(1.0 - r.success_prob, 0.3, 1e-14);
  ASSERT_TRUE(r.state.has_value());
}

TEST(Filter, IdpFilterMakesFilteredStatesOrthogonal) {
  const double theta = 0.4;
  const MeasurementPair p = measurement_pair(theta);
  const FilterOperator f = filter_for_budget(theta, p.c());
  EXPECT_NEAR(f.f(), std::tan(theta), 1e-14);
  const auto a = apply_filter(f, p.phi).state;
  const auto b = apply_filter(f, p.psi).state;
  ASSERT_TRUE(a && b);
  EXPECT_NEAR(a->inner(*b), 0.0, 1e-14);
}

TEST(Filter, BudgetBeyondIdpThrows) {
  EXPECT_THROW(filter_for_budget(std::numbers::pi / 6, 0.9), DomainError);
  EXPECT_THROW(FilterOperator(1.5), DomainError);
}

TEST(Filter, ZeroFilterAnnihilatesZeroState) {
  const FilterResult r = apply_filter(FilterOperator(0.0), PureQubitState::zero());
  EXPECT_FALSE(r.state.has_value());
  EXPECT_EQ(r.success_prob, 0.0);
}
