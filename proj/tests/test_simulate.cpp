#include "hara/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace hara {
namespace {

SimConfig base_config() {
  SimConfig cfg;
  cfg.prior = Prior::gaussian(0.5, 0.5);
  cfg.mkt = MarketParams{0.0, 0.3, 1.0};
  cfg.utility = PowerUtility{-1.0, 1.0, 0.0};
  cfg.n_paths = 2000;
  cfg.n_steps = 50;
  cfg.seed = 7;
  cfg.x0 = 1.0;
  return cfg;
}

TEST(SimValidate, RejectsBadInputs) {
  SimConfig cfg = base_config();
  cfg.n_paths = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = base_config();
  cfg.antithetic = true;
  cfg.n_paths = 1001;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = base_config();
  cfg.x0 = -1.0;  // negative wealth outside the power domain with eta=0
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Sim, DeterministicRerunsAreBitIdentical) {
  const SimConfig cfg = base_config();
  const SimReport a = simulate(cfg);
  const SimReport b = simulate(cfg);
  ASSERT_EQ(a.strategies.size(), b.strategies.size());
  for (std::size_t s = 0; s < a.strategies.size(); ++s) {
    EXPECT_EQ(a.strategies[s].mean_utility, b.strategies[s].mean_utility);
    EXPECT_EQ(a.strategies[s].std_error, b.strategies[s].std_error);
    EXPECT_EQ(a.strategies[s].n_valid, b.strategies[s].n_valid);
  }
  EXPECT_EQ(a.paired_mean, b.paired_mean);
  EXPECT_EQ(a.paired_std_error, b.paired_std_error);
}

TEST(Sim, SeedChangesOutcome) {
  SimConfig cfg = base_config();
  const SimReport a = simulate(cfg);
  cfg.seed = 8;
  const SimReport b = simulate(cfg);
  EXPECT_NE(a.strategies[0].mean_utility, b.strategies[0].mean_utility);
}

TEST(Sim, PointMassOptimalEqualsMyopicExactly) {
  for (double theta0 : {-0.3, 0.0, 0.3}) {
    SimConfig cfg = base_config();
    cfg.prior = Prior::point_mass(theta0);
    const SimReport rep = simulate(cfg);
    ASSERT_TRUE(rep.has_paired);
    EXPECT_EQ(rep.paired_mean, 0.0);
    EXPECT_EQ(rep.paired_std_error, 0.0);
  }
}

TEST(Sim, RisklessWealthWhenThetaZeroAndMertonZero) {
  // merton(0) holds nothing in the risky asset, so wealth compounds at r
  SimConfig cfg = base_config();
  cfg.mkt.r = 0.05;
  cfg.prior = Prior::point_mass(0.0);
  cfg.utility = LogUtility{1.0, 0.0};
  cfg.strategies = {{StrategyKind::FixedMerton, 0.0}};
  cfg.n_paths = 4;
  const SimReport rep = simulate(cfg);
  // Euler compounding of the riskless leg: x0 (1 + r dt)^steps
  const double dt = cfg.mkt.T / cfg.n_steps;
  const double expected = std::log(std::pow(1.0 + cfg.mkt.r * dt, cfg.n_steps));
  EXPECT_NEAR(rep.strategies[0].mean_utility, expected, 1e-12);
  EXPECT_EQ(rep.strategies[0].std_error, 0.0);
}

TEST(Sim, RisklessWealthExactAtZeroRate) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::point_mass(0.2);
  cfg.utility = LogUtility{1.0, 0.0};
  cfg.strategies = {{StrategyKind::FixedMerton, 0.0}};
  cfg.n_paths = 4;
  const SimReport rep = simulate(cfg);
  EXPECT_EQ(rep.strategies[0].mean_utility, 0.0);  // log(1) exactly
}

TEST(Sim, AntitheticReducesVariance) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::point_mass(0.3);
  cfg.utility = LogUtility{1.0, 0.0};
  cfg.strategies = {{StrategyKind::Optimal}};
  cfg.n_paths = 4000;
  const SimReport plain = simulate(cfg);
  cfg.antithetic = true;
  const SimReport anti = simulate(cfg);
  EXPECT_LT(anti.strategies[0].std_error, plain.strategies[0].std_error);
}

TEST(Sim, MeanUtilityNearValueFunctionForLog) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::discrete({{0.2, 0.5}, {0.6, 0.5}});
  cfg.utility = LogUtility{1.0, 0.0};
  cfg.strategies = {{StrategyKind::Optimal}};
  cfg.n_paths = 40000;
  cfg.n_steps = 100;
  const SimReport rep = simulate(cfg);
  // E[log X_T] = E[Θ²]T/2 for the log-optimal strategy under full learning is
  // bounded above; here only check a loose sanity band around the myopic value
  EXPECT_GT(rep.strategies[0].mean_utility, 0.0);
  EXPECT_LT(rep.strategies[0].mean_utility, 0.5 * 0.36 * 1.0);  // ≤ E[Θ²]T/2
}

TEST(Sim, OptimalBeatsMyopicOnAverage) {
  SimConfig cfg = base_config();
  cfg.utility = PowerUtility{-1.0, 1.0, 0.0};
  cfg.n_paths = 20000;
  cfg.n_steps = 100;
  const SimReport rep = simulate(cfg);
  ASSERT_TRUE(rep.has_paired);
  EXPECT_GE(rep.paired_mean, -1.96 * rep.paired_std_error);
}

TEST(Sim, ViolationsCountedAndExcluded) {
  // an aggressive fixed strategy under exp utility keeps all paths valid
  SimConfig cfg = base_config();
  cfg.utility = ExpUtility{1.0};
  cfg.strategies = {{StrategyKind::FixedMerton, 5.0}};
  cfg.n_paths = 100;
  const SimReport rep = simulate(cfg);
  EXPECT_EQ(rep.strategies[0].violations, 0);
  EXPECT_EQ(rep.strategies[0].n_valid, 100);
}

TEST(FilterSde, RequiresDiscretePrior) {
  SimConfig cfg = base_config();
  EXPECT_THROW(filter_sde_check(cfg), std::invalid_argument);
}

TEST(FilterSde, ExactForPointMass) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::point_mass(0.3);
  cfg.n_paths = 100;
  const FilterSdeResult res = filter_sde_check(cfg);
  EXPECT_NEAR(res.max_error, 0.0, 1e-12);
  EXPECT_NEAR(res.max_mass_error, 0.0, 1e-12);
}

TEST(FilterSde, ErrorHalvesWithStepCount) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::discrete({{0.2, 0.5}, {0.6, 0.5}});
  cfg.n_paths = 4000;
  cfg.n_steps = 250;
  const FilterSdeResult coarse = filter_sde_check(cfg);
  cfg.n_steps = 500;
  const FilterSdeResult fine = filter_sde_check(cfg);
  ASSERT_GT(fine.max_error, 0.0);
  const double ratio = coarse.max_error / fine.max_error;
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 3.0);
}

TEST(FilterSde, MassStaysNormalized) {
  SimConfig cfg = base_config();
  cfg.prior = Prior::discrete({{-0.2, 0.25}, {0.1, 0.5}, {0.5, 0.25}});
  cfg.n_paths = 500;
  cfg.n_steps = 200;
  const FilterSdeResult res = filter_sde_check(cfg);
  EXPECT_LT(res.max_mass_error, 0.05);
  EXPECT_LT(res.max_prob_violation, 0.05);
}

TEST(SplitMix, DistinctStreams) {
  auto a = detail::path_rng(1, 0);
  auto b = detail::path_rng(1, 1);
  EXPECT_NE(a(), b());
}

}  // namespace
}  // namespace hara
