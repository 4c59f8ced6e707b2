// Posterior quantities of the partially observed market price of risk:
// F(t,y), the posterior density w.r.t. the prior, and the conditional
// mean/variance of Θ given the observation Y_t = y.
#pragma once

#include <cmath>
#include <stdexcept>

#include "hara/prior.hpp"

namespace hara {

// log F(t,y) with F(t,y) = ∫ exp(θy - θ²t/2) μ(dθ). Extended to t=0 by
// F(0,y) := 1.
inline double log_F(const Prior& prior, double t, double y) {
  if (t < 0.0) throw std::domain_error("log_F: t must be nonnegative");
  if (t == 0.0) return 0.0;
  return prior.log_integrate_exp([&](double theta) { return theta * y - 0.5 * theta * theta * t; });
}

// Posterior density p(t,y,θ) = e^{θy - θ²t/2} / F(t,y) w.r.t. μ.
class PosteriorDensity {
 public:
  PosteriorDensity(double t, double y, double log_norm) : t_(t), y_(y), log_norm_(log_norm) {}

  double operator()(double theta) const {
    return std::exp(theta * y_ - 0.5 * theta * theta * t_ - log_norm_);
  }

 private:
  double t_;
  double y_;
  double log_norm_;
};

inline PosteriorDensity posterior_density(const Prior& prior, double t, double y) {
  if (!(t > 0.0))
    throw std::domain_error("posterior defined for t>0; at t=0 the posterior is the prior");
  return PosteriorDensity(t, y, log_F(prior, t, y));
}

namespace detail {

// First and second posterior moments of Θ in one pass, max-subtracted.
struct PosteriorMoments {
  double mean = 0.0;
  double second = 0.0;
};

inline PosteriorMoments posterior_moments(const Prior& prior, double t, double y) {
  const auto& thetas = prior.nodes();
  const auto& ws = prior.weights();
  double mx = -INFINITY;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double e = thetas[i] * y - 0.5 * thetas[i] * thetas[i] * t;
    if (e > mx) mx = e;
  }
  double den = 0.0, num1 = 0.0, num2 = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double f = ws[i] * std::exp(thetas[i] * y - 0.5 * thetas[i] * thetas[i] * t - mx);
    den += f;
    num1 += thetas[i] * f;
    num2 += thetas[i] * thetas[i] * f;
  }
  return {num1 / den, num2 / den};
}

}  // namespace detail

// Posterior mean Θ̂(t,y) = ∫ θ p(t,y,θ) μ(dθ) = ∂_y log F(t,y) for t>0;
// the prior mean at t=0.
inline double theta_hat(const Prior& prior, double t, double y) {
  if (t < 0.0) throw std::domain_error("theta_hat: t must be nonnegative");
  if (t == 0.0) return prior.mean();
  if (prior.size() == 1) return prior.nodes()[0];  // degenerate posterior
  return detail::posterior_moments(prior, t, y).mean;
}

// Posterior variance; second moment minus squared mean, clamped at 0.
inline double theta_var(const Prior& prior, double t, double y) {
  if (t < 0.0) throw std::domain_error("theta_var: t must be nonnegative");
  if (t == 0.0) return prior.variance();
  if (prior.size() == 1) return 0.0;
  const auto m = detail::posterior_moments(prior, t, y);
  return std::max(m.second - m.mean * m.mean, 0.0);
}

struct FilterState {
  double t = 0.0;
  double y = 0.0;
  double log_F = 0.0;
  double theta_hat = 0.0;
  double theta_var = 0.0;
};

inline FilterState filter_state(const Prior& prior, double t, double y) {
  return FilterState{t, y, log_F(prior, t, y), theta_hat(prior, t, y), theta_var(prior, t, y)};
}

}  // namespace hara
