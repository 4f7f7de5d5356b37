#include <gtest/gtest.h>

#include <cmath>

#include "mdisc/convexity.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/strategies.hpp"

using namespace mdisc;

TEST(YRoot, ReferenceValue) {
  EXPECT_NEAR(y_root(0.5, 0.3), -0.0854101966249684545, 1e-13);
  EXPECT_NEAR(success_from_y(0.5, y_root(0.5, 0.3), 0.3), 0.6587256540907238375, 1e-13);
}

TEST(YRoot, AgreesWithPureCurveOnGrid) {
  for (double c = 0.1; c < 0.95; c += 0.1) {
    const PairAngle pa = PairAngle::from_overlap(c);
    for (double p = 0.01; p < boundary_PIB(c); p += 0.05) {
      EXPECT_NEAR(success_from_y(c, y_root(c, p), p), single_pure_curve(pa, p).point.p_success, 1e-11);
    }
  }
}

TEST(SecondDerivative, HighPrecisionReferences) {
  EXPECT_NEAR(second_derivative(0.5, 0.3).d2PS_dPI2, 0.1578367051000545676, 1e-10);
  EXPECT_NEAR(second_derivative(0.3, 0.2).d2PS_dPI2, 0.0712138493618300466, 1e-10);
  EXPECT_NEAR(second_derivative(0.9, 0.5).d2PS_dPI2, 0.1003221533530657203, 1e-10);
}

TEST(SecondDerivative, NonNegativeOnConvexGrid) {
  for (int i = 1; i <= 19; ++i) {
    const double c = 0.05 * i;
    const double hi = boundary_PIB(c) - 1e-3;
    for (int k = 0; k < 30; ++k) {
      const double p = 1e-3 + (hi - 1e-3) * k / 29.0;
      EXPECT_GE(second_derivative(c, p).d2PS_dPI2, -1e-9) << c << " " << p;
    }
  }
}

TEST(ConcaveBranch, ClosedFormValue) {
  EXPECT_NEAR(concave_second_derivative(0.5, 0.5), -3.4641016151377546, 1e-12);
  EXPECT_THROW(concave_second_derivative(0.5, 0.9), DomainError);
}

TEST(FiniteDifference, BothBranches) {
  const auto convex = finite_difference_check(0.5, 0.3);
  EXPECT_EQ(convex.branch, Branch::Convex);
  EXPECT_LT(convex.rel_err, 1e-3);
  const auto concave = finite_difference_check(0.5, 0.61);
  EXPECT_EQ(concave.branch, Branch::Concave);
  EXPECT_LT(concave.analytic, 0.0);
  EXPECT_LT(concave.rel_err, 1e-3);
  const auto forced = finite_difference_check(0.5, 0.5, kSecondDerivativeStep, Branch::Concave);
  EXPECT_NEAR(forced.analytic, -3.4641016151377546, 1e-12);
  EXPECT_LT(forced.rel_err, 1e-3);
}

TEST(FiniteDifference, WindowAcrossBoundaryThrows) {
  EXPECT_THROW(finite_difference_check(0.5, boundary_PIB(0.5)), DomainError);
  EXPECT_THROW(finite_difference_check(0.5, 5e-5), DomainError);
  EXPECT_THROW(finite_difference_check(1.0, 0.3), DomainError);
}

TEST(Branch, Names) {
  EXPECT_EQ(to_string(Branch::Convex), "convex");
  EXPECT_EQ(to_string(Branch::Concave), "concave");
}
