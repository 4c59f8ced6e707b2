// Monte Carlo simulation of the learning dynamics and wealth under optimal,
// myopic, and fixed-Merton strategies on shared noise.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hara/filter.hpp"
#include "hara/policy.hpp"
#include "hara/prior.hpp"
#include "hara/utility.hpp"

namespace hara {

enum class StrategyKind { Optimal, Myopic, FixedMerton };

struct StrategySpec {
  StrategyKind kind = StrategyKind::Optimal;
  double theta = 0.0;  // FixedMerton only

  std::string name() const {
    switch (kind) {
      case StrategyKind::Optimal: return "optimal";
      case StrategyKind::Myopic: return "myopic";
      case StrategyKind::FixedMerton: return "merton(" + std::to_string(theta) + ")";
    }
    return "?";
  }
};

struct SimConfig {
  int n_paths = 10000;
  int n_steps = 250;
  std::uint64_t seed = 1;
  std::vector<StrategySpec> strategies = {{StrategyKind::Optimal}, {StrategyKind::Myopic}};
  UtilitySpec utility = LogUtility{};
  Prior prior = Prior::point_mass(0.0);
  MarketParams mkt{0.0, 0.2, 1.0};
  double x0 = 1.0;
  bool antithetic = false;
  QuadConfig quad;

  void validate() const {
    if (n_paths < 1 || n_steps < 1) throw std::invalid_argument("SimConfig: n_paths, n_steps >= 1");
    if (antithetic && n_paths % 2 != 0)
      throw std::invalid_argument("SimConfig: antithetic requires an even path count");
    mkt.validate();
    hara::validate(utility);
    if (!in_domain(utility, x0 * std::exp(mkt.r * mkt.T)))
      throw std::invalid_argument("SimConfig: x0 e^{rT} outside the utility domain");
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a2ca9fd57e62ULL ^ 0x2545f4914f6cdd1dULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(path_index + 1)));
}

// Uniform-grid table with 4-point Lagrange interpolation and a direct-eval
// fallback outside the tabulated range.
class InterpTable {
 public:
  InterpTable() = default;

  InterpTable(double ymin, double ymax, int n, std::function<double(double)> f)
      : ymin_(ymin), h_((ymax - ymin) / (n - 1)), fallback_(std::move(f)) {
    values_.resize(n);
    for (int i = 0; i < n; ++i) values_[i] = fallback_(ymin_ + h_ * i);
  }

  // Constant table; exact, no interpolation rounding.
  explicit InterpTable(double constant) : constant_(constant), is_constant_(true) {}

  double operator()(double y) const {
    if (is_constant_) return constant_;
    const double u = (y - ymin_) / h_;
    const int i = static_cast<int>(std::floor(u));
    if (i < 1 || i + 2 >= static_cast<int>(values_.size())) return fallback_(y);
    const double s = u - i;  // in [0,1)
    const double a = values_[i - 1], b = values_[i], c = values_[i + 1], d = values_[i + 2];
    return b + s * ((c - a) / 2.0 +
                    s * ((a - 2.0 * b + c) / 2.0 +
                         s * ((d - a) / 6.0 + (b - c) / 2.0)));
  }

 private:
  double ymin_ = 0.0;
  double h_ = 1.0;
  std::vector<double> values_;
  std::function<double(double)> fallback_;
  double constant_ = 0.0;
  bool is_constant_ = false;
};

}  // namespace detail

// Per-timestep tables of the filter mean and of the policy integrals, so the
// path loop costs an interpolation instead of a quadrature per step.
class PolicyCache {
 public:
  PolicyCache(const Prior& prior, const UtilitySpec& utility, const MarketParams& mkt, int n_steps,
              const QuadConfig& quad, bool need_optimal)
      : prior_(prior), utility_(utility), mkt_(mkt), n_steps_(n_steps) {
    const double dt = mkt.T / n_steps;
    double theta_lo, theta_hi;
    if (const auto b = prior.support_bounds()) {
      theta_lo = b->lo;
      theta_hi = b->hi;
    } else {
      theta_lo = prior.gaussian_mean() - 8.0 * prior.gaussian_sd();
      theta_hi = prior.gaussian_mean() + 8.0 * prior.gaussian_sd();
    }
    const double pad = 8.0 * std::sqrt(mkt.T) + 1.0;
    const double ymin = std::min(0.0, theta_lo * mkt.T) - pad;
    const double ymax = std::max(0.0, theta_hi * mkt.T) + pad;
    constexpr int kGrid = 513;

    const bool degenerate = prior.size() == 1;
    const bool is_power = std::holds_alternative<PowerUtility>(utility);
    const bool is_exp = std::holds_alternative<ExpUtility>(utility);

    theta_hat_.reserve(n_steps);
    if (need_optimal) optimal_mean_.reserve(n_steps);
    for (int k = 0; k < n_steps; ++k) {
      const double t = k * dt;
      if (degenerate) {
        theta_hat_.emplace_back(prior.nodes()[0]);
      } else {
        theta_hat_.emplace_back(ymin, ymax, kGrid,
                                [this, t](double y) { return theta_hat(prior_, t, y); });
      }
      if (!need_optimal) continue;
      if (degenerate) {
        optimal_mean_.emplace_back(prior.nodes()[0]);
      } else if (is_power) {
        const double p = detail::tilt_exponent(std::get<PowerUtility>(utility).gamma);
        optimal_mean_.emplace_back(ymin, ymax, kGrid, [this, t, p](double y) {
          return detail::tilted_moments_once(prior_, mkt_, t, y, p, 64).theta_mean;
        });
      } else if (is_exp) {
        optimal_mean_.emplace_back(ymin, ymax, kGrid, [this, t](double y) {
          return expected_terminal_theta_hat(prior_, mkt_, t, y);
        });
      } else {
        // log investor is myopic
        optimal_mean_.emplace_back(ymin, ymax, kGrid,
                                   [this, t](double y) { return theta_hat(prior_, t, y); });
      }
    }
  }

  double theta_hat_at(int step, double y) const { return theta_hat_[step](y); }

  // Amount in the risky asset for the given strategy at step k.
  double portfolio(const StrategySpec& strat, int step, double x, double y) const {
    const double t = step * (mkt_.T / n_steps_);
    switch (strat.kind) {
      case StrategyKind::FixedMerton:
        return merton_amount(t, x, strat.theta);
      case StrategyKind::Myopic:
        return merton_amount(t, x, theta_hat_[step](y));
      case StrategyKind::Optimal:
        if (std::holds_alternative<LogUtility>(utility_))
          return merton_amount(t, x, theta_hat_[step](y));
        return merton_amount(t, x, optimal_mean_[step](y));
    }
    return 0.0;
  }

 private:
  double merton_amount(double t, double x, double theta) const {
    return std::visit(
        [&](const auto& u) -> double {
          using U = std::decay_t<decltype(u)>;
          if constexpr (std::is_same_v<U, PowerUtility>)
            return (x / (mkt_.sigma * (1.0 - u.gamma)) +
                    u.eta * std::exp(-mkt_.r * (mkt_.T - t)) / (mkt_.sigma * u.beta)) *
                   theta;
          else if constexpr (std::is_same_v<U, LogUtility>)
            return (x / mkt_.sigma +
                    u.eta * std::exp(-mkt_.r * (mkt_.T - t)) / (mkt_.sigma * u.beta)) *
                   theta;
          else
            return std::exp(-mkt_.r * (mkt_.T - t)) / (mkt_.sigma * u.beta) * theta;
        },
        utility_);
  }

  Prior prior_;
  UtilitySpec utility_;
  MarketParams mkt_;
  int n_steps_;
  std::vector<detail::InterpTable> theta_hat_;
  std::vector<detail::InterpTable> optimal_mean_;
};

struct StrategyStats {
  std::string name;
  double mean_utility = 0.0;
  double std_error = 0.0;
  double certainty_equivalent = 0.0;
  long n_valid = 0;
  long violations = 0;
};

struct SimReport {
  std::vector<StrategyStats> strategies;
  bool has_paired = false;  // Optimal and Myopic both simulated
  double paired_mean = 0.0;
  double paired_std_error = 0.0;
  long paired_n = 0;
};

namespace detail {

inline double sample_theta(const Prior& prior, std::mt19937_64& rng) {
  switch (prior.kind()) {
    case PriorKind::PointMass:
      return prior.nodes()[0];
    case PriorKind::Gaussian: {
      std::normal_distribution<double> n(prior.gaussian_mean(), prior.gaussian_sd());
      return n(rng);
    }
    default: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double target = u(rng), acc = 0.0;
      for (std::size_t i = 0; i < prior.size(); ++i) {
        acc += prior.weights()[i];
        if (target <= acc) return prior.nodes()[i];
      }
      return prior.nodes().back();
    }
  }
}

constexpr double kDomainEps = 1e-12;

inline bool wealth_admissible(const UtilitySpec& u, const MarketParams& mkt, double t, double x) {
  const double forward = x * std::exp(mkt.r * (mkt.T - t));
  return std::visit(
      [forward](const auto& v) -> bool {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerUtility>)
          return v.beta * forward / (1.0 - v.gamma) + v.eta > kDomainEps;
        else if constexpr (std::is_same_v<V, LogUtility>)
          return v.beta * forward + v.eta > kDomainEps;
        else
          return true;
      },
      u);
}

}  // namespace detail

// Euler-Maruyama wealth stepping on a uniform grid. The filter along each
// path uses the exact formulas; deterministic given the seed.
inline SimReport simulate(const SimConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_paths;
  const int steps = cfg.n_steps;
  const double dt = cfg.mkt.T / steps;

  bool need_optimal = false;
  int opt_idx = -1, myo_idx = -1;
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    if (cfg.strategies[s].kind == StrategyKind::Optimal) {
      need_optimal = true;
      opt_idx = static_cast<int>(s);
    }
    if (cfg.strategies[s].kind == StrategyKind::Myopic) myo_idx = static_cast<int>(s);
  }
  const PolicyCache cache(cfg.prior, cfg.utility, cfg.mkt, steps, cfg.quad, need_optimal);

  const std::size_t n_strat = cfg.strategies.size();
  std::vector<std::vector<double>> utilities(n_strat);  // NaN = violated path
  for (auto& v : utilities) v.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<long> violations(n_strat, 0);

  std::vector<double> dW(steps);
  std::vector<double> wealth(n_strat);
  std::vector<char> alive(n_strat);

  const int n_draws = cfg.antithetic ? n / 2 : n;
  for (int j = 0; j < n_draws; ++j) {
    auto rng = detail::path_rng(cfg.seed, static_cast<std::uint64_t>(j));
    const double theta = detail::sample_theta(cfg.prior, rng);
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    for (int k = 0; k < steps; ++k) dW[k] = normal(rng);

    const int reps = cfg.antithetic ? 2 : 1;
    for (int rep = 0; rep < reps; ++rep) {
      const double sign = rep == 0 ? 1.0 : -1.0;
      const int path = cfg.antithetic ? 2 * j + rep : j;
      std::fill(wealth.begin(), wealth.end(), cfg.x0);
      std::fill(alive.begin(), alive.end(), 1);
      double y = 0.0;
      for (int k = 0; k < steps; ++k) {
        const double dYk = theta * dt + sign * dW[k];
        const double t_next = (k + 1) * dt;
        for (std::size_t s = 0; s < n_strat; ++s) {
          if (!alive[s]) continue;
          const double pi = cache.portfolio(cfg.strategies[s], k, wealth[s], y);
          wealth[s] += cfg.mkt.r * wealth[s] * dt + cfg.mkt.sigma * pi * dYk;
          if (!detail::wealth_admissible(cfg.utility, cfg.mkt, t_next, wealth[s])) {
            alive[s] = 0;
            ++violations[s];
          }
        }
        y += dYk;
      }
      for (std::size_t s = 0; s < n_strat; ++s)
        if (alive[s]) utilities[s][path] = evaluate(cfg.utility, wealth[s]);
    }
  }

  SimReport rep;
  for (std::size_t s = 0; s < n_strat; ++s) {
    StrategyStats st;
    st.name = cfg.strategies[s].name();
    st.violations = violations[s];
    std::vector<double> valid;
    valid.reserve(n);
    for (double u : utilities[s])
      if (!std::isnan(u)) valid.push_back(u);
    st.n_valid = static_cast<long>(valid.size());
    if (!valid.empty()) {
      st.mean_utility = pairwise_sum(valid) / static_cast<double>(valid.size());
      double ss = 0.0;
      for (double u : valid) ss += (u - st.mean_utility) * (u - st.mean_utility);
      st.std_error = valid.size() > 1
                         ? std::sqrt(ss / (valid.size() - 1.0) / static_cast<double>(valid.size()))
                         : 0.0;
      st.certainty_equivalent = certainty_equivalent(cfg.utility, st.mean_utility);
    }
    rep.strategies.push_back(std::move(st));
  }

  if (opt_idx >= 0 && myo_idx >= 0) {
    std::vector<double> diffs;
    diffs.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double a = utilities[opt_idx][i], b = utilities[myo_idx][i];
      if (!std::isnan(a) && !std::isnan(b)) diffs.push_back(a - b);
    }
    rep.has_paired = !diffs.empty();
    if (rep.has_paired) {
      rep.paired_n = static_cast<long>(diffs.size());
      rep.paired_mean = pairwise_sum(diffs) / static_cast<double>(diffs.size());
      double ss = 0.0;
      for (double d : diffs) ss += (d - rep.paired_mean) * (d - rep.paired_mean);
      rep.paired_std_error =
          diffs.size() > 1
              ? std::sqrt(ss / (diffs.size() - 1.0) / static_cast<double>(diffs.size()))
              : 0.0;
    }
  }
  return rep;
}

struct FilterSdeResult {
  double max_error = 0.0;            // max |mean deviation| of Euler vs exact filter
  double max_mass_error = 0.0;       // |Σ p̂ w - 1| along Euler density paths
  double max_prob_violation = 0.0;   // amount by which Euler atom masses p̂·w leave [0, 1]
};

// Euler-integrates the filter SDEs dΘ̂ = V̂(dY - Θ̂dt) and
// dp̂(θ) = p̂(θ)(θ - Θ̂)(dY - Θ̂dt) along simulated Y paths and compares
// against the exact closed-form filter. Discrete priors only.
inline FilterSdeResult filter_sde_check(const SimConfig& cfg) {
  if (cfg.prior.kind() != PriorKind::PointMass && cfg.prior.kind() != PriorKind::Discrete)
    throw std::invalid_argument("filter_sde_check: requires a discrete prior");
  const int steps = cfg.n_steps;
  const int n = cfg.n_paths;
  const double dt = cfg.mkt.T / steps;
  const auto& thetas = cfg.prior.nodes();
  const auto& ws = cfg.prior.weights();
  const std::size_t na = thetas.size();

  std::vector<double> dev_theta(steps + 1, 0.0);
  std::vector<std::vector<double>> dev_p(steps + 1, std::vector<double>(na, 0.0));
  FilterSdeResult res;

  std::vector<double> p_euler(na);
  for (int j = 0; j < n; ++j) {
    auto rng = detail::path_rng(cfg.seed, static_cast<std::uint64_t>(j));
    const double theta = detail::sample_theta(cfg.prior, rng);
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));

    std::fill(p_euler.begin(), p_euler.end(), 1.0);  // density w.r.t. μ at t=0
    double theta_euler = cfg.prior.mean();
    double y = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double t = k * dt;
      const double dY = theta * dt + normal(rng);
      // scalar SDE with the exact conditional variance as coefficient
      const double v_hat = theta_var(cfg.prior, t, y);
      theta_euler += v_hat * (dY - theta_euler * dt);
      // density SDE, coupled through its own mean
      double mean_euler = 0.0;
      for (std::size_t a = 0; a < na; ++a) mean_euler += ws[a] * thetas[a] * p_euler[a];
      for (std::size_t a = 0; a < na; ++a)
        p_euler[a] += p_euler[a] * (thetas[a] - mean_euler) * (dY - mean_euler * dt);
      y += dY;

      const double t_next = (k + 1) * dt;
      dev_theta[k + 1] += theta_euler - theta_hat(cfg.prior, t_next, y);
      const auto post = posterior_density(cfg.prior, t_next, y);
      double mass = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        dev_p[k + 1][a] += p_euler[a] - post(thetas[a]);
        const double atom_mass = ws[a] * p_euler[a];
        mass += atom_mass;
        res.max_prob_violation =
            std::max({res.max_prob_violation, -atom_mass, atom_mass - 1.0});
      }
      res.max_mass_error = std::max(res.max_mass_error, std::abs(mass - 1.0));
    }
  }
  for (int k = 0; k <= steps; ++k) {
    res.max_error = std::max(res.max_error, std::abs(dev_theta[k] / n));
    for (std::size_t a = 0; a < na; ++a)
      res.max_error = std::max(res.max_error, std::abs(dev_p[k][a] / n));
  }
  return res;
}

}  // namespace hara
