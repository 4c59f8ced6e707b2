// Closed forms for the Gaussian prior: F, posterior mean/variance, optimal
// power portfolio, portfolio ratio, and hedging demands. Serves as the
// independent oracle for the quadrature path.
#pragma once

#include <cmath>
#include <stdexcept>

#include "hara/utility.hpp"

namespace hara {

struct GaussianPriorParams {
  double m = 0.0;  // prior mean
  double v = 0.0;  // prior standard deviation, > 0

  void validate() const {
    if (!(v > 0.0)) throw std::invalid_argument("GaussianPriorParams: v must be positive");
  }
};

// Existence/finiteness of the power problem: (1-γ) - γv²T > 0.
inline bool exists_power(const GaussianPriorParams& gp, const MarketParams& mkt, double gamma) {
  return (1.0 - gamma) - gamma * gp.v * gp.v * mkt.T > 0.0;
}

namespace gaussian_detail {

constexpr double kNearDivergent = 1e-8;

inline double denom(const GaussianPriorParams& gp, const MarketParams& mkt, double t, double gamma) {
  const double v2 = gp.v * gp.v;
  const double d = (1.0 - gamma) - gamma * v2 * mkt.T + v2 * t;
  const double margin = (1.0 - gamma) - gamma * v2 * mkt.T;
  if (!(margin > kNearDivergent))
    throw std::domain_error(
        margin > 0.0 ? "gaussian power problem near-divergent: (1-gamma)-gamma v^2 T < 1e-8"
                     : "gaussian power problem divergent: (1-gamma)-gamma v^2 T <= 0");
  return d;
}

}  // namespace gaussian_detail

inline double closed_log_F(const GaussianPriorParams& gp, double t, double y) {
  const double v2 = gp.v * gp.v;
  const double s = gp.m + v2 * y;
  return s * s / (2.0 * v2 * (1.0 + v2 * t)) - gp.m * gp.m / (2.0 * v2) -
         0.5 * std::log1p(v2 * t);
}

inline double closed_theta_hat(const GaussianPriorParams& gp, double t, double y) {
  const double v2 = gp.v * gp.v;
  return (gp.m + v2 * y) / (1.0 + v2 * t);
}

inline double closed_theta_var(const GaussianPriorParams& gp, double t) {
  const double v2 = gp.v * gp.v;
  return v2 / (1.0 + v2 * t);
}

// Ratio π̂_γ / π^m_γ = (1-γ)(1+v²t) / ((1-γ) - γv²T + v²t).
inline double closed_ratio(const GaussianPriorParams& gp, const MarketParams& mkt, double t,
                           double gamma) {
  const double v2 = gp.v * gp.v;
  return (1.0 - gamma) * (1.0 + v2 * t) / gaussian_detail::denom(gp, mkt, t, gamma);
}

inline double closed_pi_hat(const GaussianPriorParams& gp, const PowerUtility& util,
                            const MarketParams& mkt, const EvalPoint& pt) {
  util.validate();
  require_admissible(util, mkt, pt);
  const double factor = pt.x / (mkt.sigma * (1.0 - util.gamma)) +
                        util.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * util.beta);
  const double v2 = gp.v * gp.v;
  return factor * closed_theta_hat(gp, pt.t, pt.y) * (1.0 - util.gamma) * (1.0 + v2 * pt.t) /
         gaussian_detail::denom(gp, mkt, pt.t, util.gamma);
}

// Relative hedging demand (π̂-π^m)/π^m = γv²(T-t) / ((1-γ) - γv²T + v²t).
inline double closed_relative_hedging(const GaussianPriorParams& gp, const MarketParams& mkt,
                                      double t, double gamma) {
  const double v2 = gp.v * gp.v;
  return gamma * v2 * (mkt.T - t) / gaussian_detail::denom(gp, mkt, t, gamma);
}

inline double closed_hedging(const GaussianPriorParams& gp, const PowerUtility& util,
                             const MarketParams& mkt, const EvalPoint& pt) {
  util.validate();
  require_admissible(util, mkt, pt);
  const double factor = pt.x / (mkt.sigma * (1.0 - util.gamma)) +
                        util.eta * std::exp(-mkt.r * (mkt.T - pt.t)) / (mkt.sigma * util.beta);
  const double v2 = gp.v * gp.v;
  return factor * closed_theta_hat(gp, pt.t, pt.y) * util.gamma * v2 * (mkt.T - pt.t) /
         gaussian_detail::denom(gp, mkt, pt.t, util.gamma);
}

}  // namespace hara
