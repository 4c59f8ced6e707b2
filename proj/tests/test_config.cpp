#include "hara/config.hpp"

#include <gtest/gtest.h>

#include "hara/verify.hpp"

namespace hara {
namespace {

const char* kFullConfig = R"(# demo run
[market]
r = 0.02
sigma = 0.2
T = 1

[prior]
kind = discrete
atoms = [(0.2,0.5),(0.6,0.5)]

[utility]
family = power
gamma = -1
beta = 1
eta = 0.5

[eval]
t = 0,0.25,0.5
y = linspace(-1,1,5)
x = 2

[quad]
z_nodes = 48
theta_nodes = 48
tol = 1e-9

[sweep]
gammas = linspace(-8,0.8,10)

[sim]
n_paths = 500
n_steps = 50
seed = 42
x0 = 1.5
antithetic = true
strategies = optimal,myopic,merton:0.4

[output]
csv = out.csv
precision = 10
)";

TEST(Config, ParsesFullFile) {
  const RunConfig cfg = parse_config(kFullConfig);
  EXPECT_DOUBLE_EQ(cfg.mkt.r, 0.02);
  EXPECT_DOUBLE_EQ(cfg.mkt.sigma, 0.2);
  EXPECT_DOUBLE_EQ(cfg.mkt.T, 1.0);
  EXPECT_EQ(cfg.prior_kind, PriorKind::Discrete);
  ASSERT_EQ(cfg.prior_atoms.size(), 2u);
  EXPECT_DOUBLE_EQ(cfg.prior_atoms[1].first, 0.6);
  ASSERT_TRUE(std::holds_alternative<PowerUtility>(cfg.utility));
  EXPECT_DOUBLE_EQ(std::get<PowerUtility>(cfg.utility).gamma, -1.0);
  EXPECT_DOUBLE_EQ(std::get<PowerUtility>(cfg.utility).eta, 0.5);
  ASSERT_EQ(cfg.eval_t.size(), 3u);
  ASSERT_EQ(cfg.eval_y.size(), 5u);
  EXPECT_DOUBLE_EQ(cfg.eval_y.front(), -1.0);
  EXPECT_DOUBLE_EQ(cfg.eval_y.back(), 1.0);
  EXPECT_DOUBLE_EQ(cfg.eval_x, 2.0);
  EXPECT_EQ(cfg.quad.z_nodes, 48);
  ASSERT_EQ(cfg.sweep_gammas.size(), 10u);
  EXPECT_EQ(cfg.sim_n_paths, 500);
  EXPECT_TRUE(cfg.sim_antithetic);
  ASSERT_EQ(cfg.sim_strategies.size(), 3u);
  EXPECT_EQ(cfg.sim_strategies[2].kind, StrategyKind::FixedMerton);
  EXPECT_DOUBLE_EQ(cfg.sim_strategies[2].theta, 0.4);
  EXPECT_EQ(cfg.out_csv, "out.csv");
  EXPECT_EQ(cfg.out_precision, 10);
}

TEST(Config, DefaultsWhenSectionsOmitted) {
  const RunConfig cfg = parse_config("[prior]\nkind = pointmass\ntheta0 = 0.3\n");
  EXPECT_EQ(cfg.prior_kind, PriorKind::PointMass);
  EXPECT_DOUBLE_EQ(cfg.prior_theta0, 0.3);
  EXPECT_TRUE(std::holds_alternative<LogUtility>(cfg.utility));
  EXPECT_DOUBLE_EQ(cfg.mkt.sigma, 0.2);
}

TEST(Config, UnknownSectionRejectedWithPath) {
  try {
    parse_config("[markets]\nr = 0.1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("markets"), std::string::npos);
  }
}

TEST(Config, UnknownKeyRejectedWithPath) {
  try {
    parse_config("[market]\nrate = 0.1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("market.rate"), std::string::npos);
  }
}

TEST(Config, BadNumberRejected) {
  EXPECT_THROW(parse_config("[market]\nr = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[sim]\nn_paths = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[sim]\nantithetic = maybe\n"), ConfigError);
}

TEST(Config, InvalidSemanticsSurfaceAsConfigError) {
  EXPECT_THROW(parse_config("[market]\nsigma = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[utility]\nfamily = power\ngamma = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[prior]\nkind = discrete\natoms = [(0.2,0.5),(0.6,0.4)]\n"),
               ConfigError);
}

TEST(Config, RoundTripsThroughSerialization) {
  const RunConfig a = parse_config(kFullConfig);
  const RunConfig b = parse_config(serialize_config(a));
  EXPECT_EQ(serialize_config(a), serialize_config(b));
}

TEST(Config, GaussianPriorBuild) {
  const RunConfig cfg = parse_config("[prior]\nkind = gaussian\nm = 0.5\nv = 0.5\n");
  const Prior p = cfg.build_prior();
  EXPECT_TRUE(p.is_gaussian());
  EXPECT_NEAR(p.mean(), 0.5, 1e-12);
}

TEST(Config, BuildSimMatchesFields) {
  const RunConfig cfg = parse_config(kFullConfig);
  const SimConfig sim = cfg.build_sim();
  EXPECT_EQ(sim.n_paths, 500);
  EXPECT_EQ(sim.n_steps, 50);
  EXPECT_EQ(sim.seed, 42u);
  EXPECT_TRUE(sim.antithetic);
  EXPECT_NO_THROW(sim.validate());
}

TEST(Verify, PassesOnSoundDiscreteConfig) {
  const RunConfig cfg = parse_config(kFullConfig);
  const VerifyReport rep = run_verification(cfg);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  EXPECT_TRUE(rep.all_pass);
}

TEST(Verify, PassesOnGaussianConfig) {
  RunConfig cfg = parse_config(
      "[prior]\nkind = gaussian\nm = 0.5\nv = 0.5\n"
      "[utility]\nfamily = power\ngamma = -1\n");
  const VerifyReport rep = run_verification(cfg);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  EXPECT_TRUE(rep.all_pass);
}

TEST(Verify, MixedSignPriorYieldsDetectionsNotFailures) {
  RunConfig cfg = parse_config(
      "[prior]\nkind = discrete\natoms = [(-0.4,0.5),(0.6,0.5)]\n"
      "[utility]\nfamily = power\ngamma = -1\n");
  const VerifyReport rep = run_verification(cfg);
  EXPECT_TRUE(rep.all_pass);
}

}  // namespace
}  // namespace hara
