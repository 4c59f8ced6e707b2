#include "hara/filter.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hara/gaussian.hpp"
#include "oracle.hpp"

namespace hara {
namespace {

Prior two_point() { return Prior::discrete({{0.2, 0.5}, {0.6, 0.5}}); }

TEST(LogF, PointMassAtZeroIsIdenticallyOne) {
  const Prior p = Prior::point_mass(0.0);
  for (double t : {0.0, 0.3, 1.0})
    for (double y : {-5.0, 0.0, 7.0}) EXPECT_DOUBLE_EQ(log_F(p, t, y), 0.0);
}

TEST(LogF, TwoAtomDirectSum) {
  const double expected = std::log(0.5 * (std::exp(-0.02) + std::exp(-0.18)));
  EXPECT_NEAR(log_F(two_point(), 1.0, 0.0), expected, 1e-14);
  EXPECT_NEAR(std::exp(log_F(two_point(), 1.0, 0.0)), 0.9077344423590136, 1e-12);
}

TEST(LogF, GaussianClosedFormAgreement) {
  const GaussianPriorParams gp{0.5, 1.0};
  const Prior p = Prior::gaussian(gp.m, gp.v, 64);
  for (double t : {0.25, 1.0})
    for (double y : {-0.5, 0.5, 2.0})
      EXPECT_NEAR(log_F(p, t, y), closed_log_F(gp, t, y), 1e-12);
}

TEST(LogF, ExtendedToZeroTime) {
  EXPECT_DOUBLE_EQ(log_F(two_point(), 0.0, 3.0), 0.0);
  EXPECT_THROW(log_F(two_point(), -0.1, 0.0), std::domain_error);
}

TEST(Posterior, RequiresPositiveTime) {
  EXPECT_THROW(
      {
        try {
          posterior_density(two_point(), 0.0, 0.0);
        } catch (const std::domain_error& e) {
          EXPECT_STREQ(e.what(), "posterior defined for t>0; at t=0 the posterior is the prior");
          throw;
        }
      },
      std::domain_error);
}

TEST(Posterior, PointMassDensityIsOne) {
  const auto p = posterior_density(Prior::point_mass(0.4), 0.7, 1.3);
  EXPECT_NEAR(p(0.4), 1.0, 1e-14);
}

TEST(Posterior, TwoAtomDirectValues) {
  const double F = 0.5 * (std::exp(-0.02) + std::exp(-0.18));
  const auto p = posterior_density(two_point(), 1.0, 0.0);
  EXPECT_NEAR(p(0.2), std::exp(-0.02) / F, 1e-13);
  EXPECT_NEAR(p(0.6), std::exp(-0.18) / F, 1e-13);
}

TEST(Posterior, NormalizesAgainstPrior) {
  for (const Prior& prior : {two_point(), Prior::gaussian(0.5, 0.5), Prior::point_mass(-0.2),
                             Prior::from_density([](double) { return 2.5; }, 0.2, 0.6)}) {
    for (double t : {0.1, 1.0})
      for (double y : {-2.0, 0.0, 2.0}) {
        const auto p = posterior_density(prior, t, y);
        EXPECT_NEAR(prior.integrate(p), 1.0, 1e-10);
      }
  }
}

TEST(ThetaHat, PointMassIsConstant) {
  const Prior p = Prior::point_mass(0.3);
  for (double t : {0.0, 0.5, 1.0})
    for (double y : {-3.0, 0.0, 4.0}) EXPECT_DOUBLE_EQ(theta_hat(p, t, y), 0.3);
}

TEST(ThetaHat, GaussianClosedForm) {
  const Prior p = Prior::gaussian(0.0, 1.0, 64);
  EXPECT_NEAR(theta_hat(p, 1.0, 1.0), 0.5, 1e-12);
  const GaussianPriorParams gp{0.3, 0.7};
  const Prior q = Prior::gaussian(gp.m, gp.v, 64);
  for (double t : {0.25, 0.75})
    for (double y : {-1.0, 0.5}) EXPECT_NEAR(theta_hat(q, t, y), closed_theta_hat(gp, t, y), 1e-12);
}

TEST(ThetaHat, TwoAtomDirectSum) {
  const double expected =
      (0.2 * std::exp(-0.02) + 0.6 * std::exp(-0.18)) / (std::exp(-0.02) + std::exp(-0.18));
  EXPECT_NEAR(theta_hat(two_point(), 1.0, 0.0), expected, 1e-14);
  EXPECT_NEAR(expected, 0.38403, 1e-5);
}

TEST(ThetaHat, AtTimeZeroReturnsPriorMean) {
  EXPECT_DOUBLE_EQ(theta_hat(two_point(), 0.0, 5.0), 0.4);
}

TEST(ThetaHat, MatchesFiniteDifferenceOfLogF) {
  const double h = 1e-5;
  for (const Prior& prior : {two_point(), Prior::gaussian(0.5, 0.5),
                             Prior::from_density([](double) { return 2.5; }, 0.2, 0.6)}) {
    for (double t : {0.25, 1.0})
      for (double y : {-1.0, 0.0, 1.5}) {
        const double fd = (log_F(prior, t, y + h) - log_F(prior, t, y - h)) / (2.0 * h);
        EXPECT_NEAR(theta_hat(prior, t, y), fd, 1e-6);
      }
  }
}

TEST(ThetaHat, MonotoneInObservation) {
  for (const Prior& prior :
       {two_point(), Prior::discrete({{-0.4, 0.5}, {0.6, 0.5}}), Prior::gaussian(0.0, 1.0),
        Prior::from_density([](double) { return 2.5; }, 0.2, 0.6)}) {
    for (double t : {0.2, 1.0}) {
      double prev = -INFINITY;
      for (double y = -4.0; y <= 4.0; y += 0.05) {
        const double th = theta_hat(prior, t, y);
        EXPECT_GE(th, prev - 1e-12);
        prev = th;
      }
    }
  }
}

TEST(ThetaHat, StaysWithinSupportBounds) {
  const Prior prior = two_point();
  for (double t : {0.0, 0.4, 1.0})
    for (double y = -10.0; y <= 10.0; y += 0.5) {
      const double th = theta_hat(prior, t, y);
      EXPECT_GE(th, 0.2 - 1e-12);
      EXPECT_LE(th, 0.6 + 1e-12);
    }
}

TEST(ThetaVar, PointMassIsZero) {
  EXPECT_DOUBLE_EQ(theta_var(Prior::point_mass(0.7), 0.8, 2.0), 0.0);
}

TEST(ThetaVar, GaussianKalmanForm) {
  const Prior p = Prior::gaussian(0.0, 1.0, 64);
  EXPECT_NEAR(theta_var(p, 1.0, 0.0), 0.5, 1e-10);
  // independent of y
  EXPECT_NEAR(theta_var(p, 1.0, 2.0), 0.5, 1e-10);
  EXPECT_NEAR(theta_var(p, 0.25, -1.0), closed_theta_var({0.0, 1.0}, 0.25), 1e-10);
}

TEST(ThetaVar, PriorVarianceAtTimeZero) {
  EXPECT_NEAR(theta_var(two_point(), 0.0, 0.0), 0.04, 1e-14);
}

TEST(ThetaVar, AgreesWithDirectPosteriorVariance) {
  const Prior prior = two_point();
  const double t = 0.8, y = 0.4;
  const auto p = posterior_density(prior, t, y);
  const double mean = prior.integrate([&](double th) { return th * p(th); });
  const double var = prior.integrate([&](double th) { return (th - mean) * (th - mean) * p(th); });
  EXPECT_NEAR(theta_var(prior, t, y), var, 1e-12);
}

TEST(FilterStateTest, InitialState) {
  const FilterState s = filter_state(two_point(), 0.0, 0.0);
  EXPECT_DOUBLE_EQ(s.log_F, 0.0);
  EXPECT_DOUBLE_EQ(s.theta_hat, 0.4);
  EXPECT_NEAR(s.theta_var, 0.04, 1e-14);
}

TEST(FilterOracle, DirectSumAgreement) {
  const Prior prior = two_point();
  for (double t : {0.3, 1.0})
    for (double y : {-1.0, 0.7}) {
      EXPECT_NEAR(std::exp(log_F(prior, t, y)), oracle::F_direct(prior, t, y), 1e-13);
      EXPECT_NEAR(theta_hat(prior, t, y), oracle::theta_hat_direct(prior, t, y), 1e-13);
    }
}

}  // namespace
}  // namespace hara
