// Optimal portfolios under partial observation for the three HARA families,
// myopic/Merton counterparts, hedging demands, ratios, and value functions.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hara/filter.hpp"
#include "hara/gaussian.hpp"
#include "hara/prior.hpp"
#include "hara/quadrature.hpp"
#include "hara/utility.hpp"

namespace hara {

struct QuadConfig {
  int z_nodes = 64;
  int theta_nodes = 64;
  double tol = 1e-9;
};

namespace detail {

// The power exponent applied to F(T, ·) inside the tilted density.
inline double tilt_exponent(double gamma) { return 1.0 / (1.0 - gamma); }

inline void check_power_gamma(double gamma) {
  if (!(gamma < 1.0 - 1e-6) || gamma == 0.0)
    throw std::invalid_argument("power portfolio: gamma must satisfy gamma < 1-1e-6, gamma != 0");
}

inline void check_gaussian_existence(const Prior& prior, const MarketParams& mkt, double gamma) {
  if (!prior.is_gaussian()) return;
  GaussianPriorParams gp{prior.gaussian_mean(), prior.gaussian_sd()};
  const double margin = (1.0 - gamma) - gamma * gp.v * gp.v * mkt.T;
  if (!(margin > 1e-8))
    throw std::domain_error("prior/gamma combination numerically divergent");
}

// log ∫ F(T,y+z)^p φ_{T-t}(z) dz and the mean of Θ̂(T,y+·) under the tilted
// density q, evaluated jointly on one z rule.
struct TiltedMoments {
  double log_h = 0.0;
  double theta_mean = 0.0;
};

// Mode of z -> p log F(T,y+z) - z^2/(2 s2) and the matched local variance.
// Centering the quadrature there keeps strongly tilted integrands (large p)
// inside the node range; the reweighting below is exact, so this only moves
// nodes, it does not change the integral being approximated.
struct TiltCenter {
  double mode = 0.0;
  double variance = 0.0;
};

inline TiltCenter tilt_center(const Prior& prior, double T, double y, double p, double s2) {
  TiltCenter c;
  c.variance = s2;
  if (p == 0.0 || prior.size() == 1) {
    c.mode = p * s2 * (prior.size() == 1 ? prior.nodes()[0] : theta_hat(prior, T, y));
    return c;
  }
  if (prior.is_gaussian()) {
    const double m = prior.gaussian_mean();
    const double v2 = prior.gaussian_sd() * prior.gaussian_sd();
    const double denom = 1.0 + v2 * T - p * v2 * s2;
    if (!(denom > 0.0)) throw std::domain_error("prior/gamma combination numerically divergent");
    c.mode = p * s2 * (m + v2 * y) / denom;
    c.variance = s2 * (1.0 + v2 * T) / denom;
    return c;
  }
  // bounded support: bisect p theta_hat(T,y+z) - z/s2 = 0
  double th_lo = prior.nodes()[0], th_hi = prior.nodes()[0];
  for (double th : prior.nodes()) {
    th_lo = std::min(th_lo, th);
    th_hi = std::max(th_hi, th);
  }
  const double s = std::sqrt(s2);
  double lo = std::min(0.0, p * th_lo * s2) - 10.0 * s;
  double hi = std::max(0.0, p * th_hi * s2) + 10.0 * s;
  auto slope = [&](double z) { return p * theta_hat(prior, T, y + z) - z / s2; };
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  c.mode = 0.5 * (lo + hi);
  const double curv = 1.0 / s2 - p * theta_var(prior, T, y + c.mode);
  c.variance = curv > 0.04 / s2 ? 1.0 / curv : 25.0 * s2;
  return c;
}

inline TiltedMoments tilted_moments_once(const Prior& prior, const MarketParams& mkt, double t,
                                         double y, double p, int n_z) {
  const double s2 = mkt.T - t;
  const TiltCenter ctr = tilt_center(prior, mkt.T, y, p, s2);
  const ZQuadrature zq = gauss_hermite_z(ctr.variance, n_z);
  double mx = -INFINITY;
  std::vector<double> lf(zq.nodes.size());
  for (std::size_t i = 0; i < zq.nodes.size(); ++i) {
    const double z = ctr.mode + zq.nodes[i];
    // integrand against the shifted kernel; the kernel swap is exact
    lf[i] = p * log_F(prior, mkt.T, y + z) - z * z / (2.0 * s2) +
            zq.nodes[i] * zq.nodes[i] / (2.0 * ctr.variance) + std::log(zq.weights[i]);
    if (lf[i] > mx) mx = lf[i];
  }
  if (mx == -INFINITY) throw std::domain_error("prior/gamma combination numerically divergent");
  double den = 0.0, num = 0.0;
  for (std::size_t i = 0; i < zq.nodes.size(); ++i) {
    const double f = std::exp(lf[i] - mx);
    den += f;
    num += theta_hat(prior, mkt.T, ctr.mode + y + zq.nodes[i]) * f;
  }
  TiltedMoments r;
  r.log_h = mx + std::log(den) + 0.5 * std::log(ctr.variance / s2);
  r.theta_mean = prior.size() == 1 ? prior.nodes()[0] : num / den;
  return r;
}

inline bool moments_close(const TiltedMoments& a, const TiltedMoments& b, double tol) {
  const double scale = std::max({std::abs(b.theta_mean), std::abs(b.log_h), 1.0});
  return std::abs(a.theta_mean - b.theta_mean) <= tol * scale &&
         std::abs(a.log_h - b.log_h) <= tol * scale;
}

// Self-converging evaluation: node count doubled once on failure, then error.
inline TiltedMoments tilted_moments(const Prior& prior, const MarketParams& mkt, double t, double y,
                                    double p, const QuadConfig& quad) {
  const TiltedMoments r1 = tilted_moments_once(prior, mkt, t, y, p, quad.z_nodes);
  const TiltedMoments r2 = tilted_moments_once(prior, mkt, t, y, p, 2 * quad.z_nodes);
  if (moments_close(r1, r2, quad.tol)) return r2;
  const TiltedMoments r4 = tilted_moments_once(prior, mkt, t, y, p, 4 * quad.z_nodes);
  if (moments_close(r2, r4, quad.tol)) return r4;
  throw std::domain_error("prior/gamma combination numerically divergent");
}

inline double power_factor(const PowerUtility& util, const MarketParams& mkt, const EvalPoint& pt) {
  return pt.x / (mkt.sigma * (1.0 - util.gamma)) +
         util.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * util.beta);
}

}  // namespace detail

// ∫ Θ̂(T, y+z) φ_{T-t}(z) dz, the exponential investor's estimate of the
// terminal posterior mean.
inline double expected_terminal_theta_hat(const Prior& prior, const MarketParams& mkt, double t,
                                          double y, const QuadConfig& quad = {}) {
  if (t >= mkt.T) return theta_hat(prior, mkt.T, y);
  if (prior.size() == 1) return prior.nodes()[0];
  auto eval = [&](int n) {
    const ZQuadrature zq = gauss_hermite_z(mkt.T - t, n);
    return zq.integrate([&](double z) { return theta_hat(prior, mkt.T, y + z); });
  };
  const double r1 = eval(quad.z_nodes);
  const double r2 = eval(2 * quad.z_nodes);
  if (std::abs(r1 - r2) <= quad.tol * std::max(std::abs(r2), 1.0)) return r2;
  const double r4 = eval(4 * quad.z_nodes);
  if (std::abs(r2 - r4) <= quad.tol * std::max(std::abs(r4), 1.0)) return r4;
  throw std::domain_error("prior/gamma combination numerically divergent");
}

// log ĥ(t,y;γ): log ∫ F(T,y+z)^{1/(1-γ)} φ_{T-t}(z) dz for t<T, the boundary
// value log F(T,y)^{1/(1-γ)} at t=T.
inline double h_value(const Prior& prior, const MarketParams& mkt, double t, double y, double gamma,
                      const QuadConfig& quad = {}) {
  detail::check_power_gamma(gamma);
  detail::check_gaussian_existence(prior, mkt, gamma);
  const double p = detail::tilt_exponent(gamma);
  if (t >= mkt.T) return p * log_F(prior, mkt.T, y);
  return detail::tilted_moments(prior, mkt, t, y, p, quad).log_h;
}

// Tilted density q(t,y,·;γ) w.r.t. Lebesgue measure; defined for any γ<1
// (γ=0 gives the representation density of the posterior mean).
class TiltedDensity {
 public:
  TiltedDensity(Prior prior, double T, double y, double p, double log_h, double variance)
      : prior_(std::move(prior)), T_(T), y_(y), p_(p), log_h_(log_h), variance_(variance) {}

  double operator()(double z) const {
    return std::exp(p_ * log_F(prior_, T_, y_ + z) - log_h_ -
                    z * z / (2.0 * variance_)) /
           std::sqrt(2.0 * M_PI * variance_);
  }

 private:
  Prior prior_;
  double T_, y_, p_, log_h_, variance_;
};

inline TiltedDensity q_density(const Prior& prior, const MarketParams& mkt, double t, double y,
                               double gamma, const QuadConfig& quad = {}) {
  if (!(gamma < 1.0)) throw std::invalid_argument("q_density: gamma must be < 1");
  if (!(t < mkt.T)) throw std::domain_error("q_density: requires t < T");
  if (gamma != 0.0) detail::check_gaussian_existence(prior, mkt, gamma);
  const double p = detail::tilt_exponent(gamma);
  const double log_h = detail::tilted_moments(prior, mkt, t, y, p, quad).log_h;
  return TiltedDensity(prior, mkt.T, y, p, log_h, mkt.T - t);
}

// Optimal power portfolio π̂_γ; at t=T the myopic boundary value.
inline double pi_hat_power(const Prior& prior, const MarketParams& mkt, const PowerUtility& util,
                           const EvalPoint& pt, const QuadConfig& quad = {}) {
  util.validate();
  require_admissible(UtilitySpec{util}, mkt, pt);
  detail::check_gaussian_existence(prior, mkt, util.gamma);
  const double factor = detail::power_factor(util, mkt, pt);
  if (pt.t >= mkt.T) return factor * theta_hat(prior, mkt.T, pt.y);
  // Below the delegation threshold the power formula is the exponential limit.
  if (util.gamma <= -1e6)
    return factor * expected_terminal_theta_hat(prior, mkt, pt.t, pt.y, quad);
  detail::check_power_gamma(util.gamma);
  const double p = detail::tilt_exponent(util.gamma);
  return factor * detail::tilted_moments(prior, mkt, pt.t, pt.y, p, quad).theta_mean;
}

// Optimal log portfolio; myopic by certainty equivalence.
inline double pi_hat_log(const Prior& prior, const MarketParams& mkt, const LogUtility& util,
                         const EvalPoint& pt) {
  util.validate();
  require_admissible(UtilitySpec{util}, mkt, pt);
  const double factor =
      pt.x / mkt.sigma + util.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * util.beta);
  return factor * theta_hat(prior, pt.t, pt.y);
}

// Optimal exponential portfolio; independent of wealth.
inline double pi_hat_exp(const Prior& prior, const MarketParams& mkt, const ExpUtility& util,
                         const EvalPoint& pt, const QuadConfig& quad = {}) {
  util.validate();
  require_admissible(UtilitySpec{util}, mkt, pt);
  const double factor = std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * util.beta);
  return factor * expected_terminal_theta_hat(prior, mkt, pt.t, pt.y, quad);
}

inline double pi_hat(const Prior& prior, const UtilitySpec& util, const MarketParams& mkt,
                     const EvalPoint& pt, const QuadConfig& quad = {}) {
  return std::visit(
      [&](const auto& u) -> double {
        using U = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<U, PowerUtility>)
          return pi_hat_power(prior, mkt, u, pt, quad);
        else if constexpr (std::is_same_v<U, LogUtility>)
          return pi_hat_log(prior, mkt, u, pt);
        else
          return pi_hat_exp(prior, mkt, u, pt, quad);
      },
      util);
}

// Merton portfolio for a known market price of risk θ.
inline double pi_merton(const UtilitySpec& util, const MarketParams& mkt, const EvalPoint& pt,
                        double theta) {
  validate(util);
  require_admissible(util, mkt, pt);
  return std::visit(
      [&](const auto& u) -> double {
        using U = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<U, PowerUtility>)
          return (pt.x / (mkt.sigma * (1.0 - u.gamma)) +
                  u.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * u.beta)) *
                 theta;
        else if constexpr (std::is_same_v<U, LogUtility>)
          return (pt.x / mkt.sigma +
                  u.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * u.beta)) *
                 theta;
        else
          return std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * u.beta) * theta;
      },
      util);
}

// Myopic portfolio: Merton's formula at the current posterior mean.
inline double pi_myopic(const Prior& prior, const UtilitySpec& util, const MarketParams& mkt,
                        const EvalPoint& pt) {
  return pi_merton(util, mkt, pt, theta_hat(prior, pt.t, pt.y));
}

struct PolicyReport {
  double pi_hat = 0.0;
  double pi_myopic = 0.0;
  double hedging_demand = 0.0;                   // pi_hat - pi_myopic
  std::optional<double> ratio;                   // undefined when pi_myopic vanishes
  std::optional<double> relative_hedging;        // ratio - 1
};

inline PolicyReport policy_report(const Prior& prior, const UtilitySpec& util,
                                  const MarketParams& mkt, const EvalPoint& pt,
                                  const QuadConfig& quad = {}) {
  PolicyReport rep;
  rep.pi_hat = pi_hat(prior, util, mkt, pt, quad);
  rep.pi_myopic = pi_myopic(prior, util, mkt, pt);
  rep.hedging_demand = rep.pi_hat - rep.pi_myopic;
  if (std::abs(rep.pi_myopic) > 1e-13 * std::max(1.0, std::abs(rep.pi_hat))) {
    rep.ratio = rep.pi_hat / rep.pi_myopic;
    rep.relative_hedging = *rep.ratio - 1.0;
  }
  return rep;
}

// Value function V̂_i(t,x,y) for the active utility family.
inline double value_function(const Prior& prior, const UtilitySpec& util, const MarketParams& mkt,
                             const EvalPoint& pt, const QuadConfig& quad = {}) {
  validate(util);
  require_admissible(util, mkt, pt);
  const double forward = pt.x * std::exp(mkt.r * (mkt.T - pt.t));
  return std::visit(
      [&](const auto& u) -> double {
        using U = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<U, PowerUtility>) {
          const double log_h = h_value(prior, mkt, pt.t, pt.y, u.gamma, quad);
          return evaluate(UtilitySpec{u}, forward) * std::exp((1.0 - u.gamma) * log_h);
        } else if constexpr (std::is_same_v<U, LogUtility>) {
          const double lf = log_F(prior, pt.t, pt.y);
          const double F = std::exp(lf);
          double tail;
          if (pt.t >= mkt.T) {
            tail = F * lf;
          } else {
            const ZQuadrature zq = gauss_hermite_z(mkt.T - pt.t, quad.z_nodes);
            tail = zq.integrate([&](double z) {
              const double l = log_F(prior, mkt.T, pt.y + z);
              return std::exp(l) * l;
            });
          }
          return F * evaluate(UtilitySpec{u}, forward) - F * lf + tail;
        } else {
          double mean_log_F;
          if (pt.t >= mkt.T) {
            mean_log_F = log_F(prior, mkt.T, pt.y);
          } else {
            const ZQuadrature zq = gauss_hermite_z(mkt.T - pt.t, quad.z_nodes);
            mean_log_F = zq.integrate([&](double z) { return log_F(prior, mkt.T, pt.y + z); });
          }
          return evaluate(UtilitySpec{u}, forward) * std::exp(mean_log_F);
        }
      },
      util);
}

struct SweepRow {
  double gamma = 0.0;
  double pi_hat = 0.0;
  double pi_myopic = 0.0;
  double hedging = 0.0;
  std::optional<double> ratio;
  std::string error;  // empty on success
};

// Power-portfolio sweep over a γ grid at a fixed evaluation point. Rows are
// emitted in ascending γ; per-row failures are recorded, not fatal.
inline std::vector<SweepRow> gamma_sweep(const Prior& prior, const MarketParams& mkt,
                                         const EvalPoint& pt, double beta, double eta,
                                         std::vector<double> gammas,
                                         const QuadConfig& quad = {}) {
  std::sort(gammas.begin(), gammas.end());
  std::vector<SweepRow> rows;
  rows.reserve(gammas.size());
  for (double g : gammas) {
    SweepRow row;
    row.gamma = g;
    try {
      PowerUtility util{g, beta, eta};
      const PolicyReport rep = policy_report(prior, UtilitySpec{util}, mkt, pt, quad);
      row.pi_hat = rep.pi_hat;
      row.pi_myopic = rep.pi_myopic;
      row.hedging = rep.hedging_demand;
      row.ratio = rep.ratio;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hara
