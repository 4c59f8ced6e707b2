// Prior distribution of the market price of risk and integration against it.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hara/quadrature.hpp"

namespace hara {

enum class PriorKind { PointMass, Discrete, Gaussian, QuadratureContinuous };

enum class SignClass { StrictlyPositive, StrictlyNegative, Mixed };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Immutable prior of Θ. Every variant is held as a node/weight set so that
// downstream integrals share one code path; Gaussian priors additionally keep
// (m, v) for closed forms and sampling. Thread-safe after construction.
class Prior {
 public:
  static Prior point_mass(double theta0) {
    Prior p;
    p.kind_ = PriorKind::PointMass;
    p.nodes_ = {theta0};
    p.weights_ = {1.0};
    p.finalize();
    return p;
  }

  static Prior discrete(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("Prior: no atoms");
    Prior p;
    p.kind_ = atoms.size() == 1 ? PriorKind::PointMass : PriorKind::Discrete;
    for (const auto& [theta, w] : atoms) {
      p.nodes_.push_back(theta);
      p.weights_.push_back(w);
    }
    p.validate_weights();
    p.finalize();
    return p;
  }

  // v is the standard deviation. The node count controls the Gauss-Hermite
  // rule used for all integrals against this prior.
  static Prior gaussian(double m, double v, int n_nodes = 64) {
    if (!(v > 0.0)) throw std::invalid_argument("Prior: gaussian sd must be positive");
    Prior p;
    p.kind_ = PriorKind::Gaussian;
    p.gaussian_m_ = m;
    p.gaussian_v_ = v;
    const QuadratureRule gh = gauss_hermite(n_nodes);
    const double scale = std::sqrt(2.0) * v;
    const double wnorm = 1.0 / std::sqrt(M_PI);
    p.nodes_.resize(gh.nodes.size());
    p.weights_.resize(gh.nodes.size());
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      p.nodes_[i] = m + scale * gh.nodes[i];
      p.weights_[i] = wnorm * gh.weights[i];
    }
    p.finalize();
    return p;
  }

  // Precomputed nodes/weights for a continuous density on a bounded interval.
  static Prior quadrature(std::vector<std::pair<double, double>> nodes) {
    if (nodes.empty()) throw std::invalid_argument("Prior: no quadrature nodes");
    Prior p;
    p.kind_ = PriorKind::QuadratureContinuous;
    for (const auto& [theta, w] : nodes) {
      p.nodes_.push_back(theta);
      p.weights_.push_back(w);
    }
    p.validate_weights();
    p.finalize();
    return p;
  }

  // Bounded continuous prior given by an (unnormalized density is rejected:
  // the rule must integrate to 1) density on [lo, hi]; Gauss-Legendre rule.
  template <typename Density>
  static Prior from_density(Density&& density, double lo, double hi, int n_nodes = 128) {
    const QuadratureRule gl = gauss_legendre(n_nodes, lo, hi);
    std::vector<std::pair<double, double>> nodes;
    nodes.reserve(gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      nodes.emplace_back(gl.nodes[i], gl.weights[i] * density(gl.nodes[i]));
    return quadrature(std::move(nodes));
  }

  PriorKind kind() const { return kind_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  bool is_gaussian() const { return kind_ == PriorKind::Gaussian; }
  double gaussian_mean() const { return gaussian_m_; }
  double gaussian_sd() const { return gaussian_v_; }

  double mean() const { return mean_; }
  double variance() const { return variance_; }

  // ∫ g(θ) μ(dθ) as the weighted node sum.
  template <typename G>
  double integrate(G&& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double gi = g(nodes_[i]);
      if (!std::isfinite(gi)) throw std::domain_error("integrand not finite");
      acc += weights_[i] * gi;
    }
    return acc;
  }

  // log ∫ e^{exponent(θ)} μ(dθ), max-subtracted before exponentiation.
  template <typename Exponent>
  double log_integrate_exp(Exponent&& exponent) const {
    std::vector<double> logs(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double e = exponent(nodes_[i]);
      if (std::isnan(e)) throw std::domain_error("integrand not finite");
      logs[i] = std::log(weights_[i]) + e;
    }
    return log_sum_exp(logs);
  }

  SignClass sign_class() const {
    if (kind_ == PriorKind::Gaussian) return SignClass::Mixed;
    bool any_nonpos = false, any_nonneg = false;
    for (double theta : nodes_) {
      if (theta <= 0.0) any_nonpos = true;
      if (theta >= 0.0) any_nonneg = true;
    }
    if (!any_nonpos) return SignClass::StrictlyPositive;
    if (!any_nonneg) return SignClass::StrictlyNegative;
    return SignClass::Mixed;
  }

  // Tight support bounds; nullopt for the Gaussian (unbounded) case.
  std::optional<Interval> support_bounds() const {
    if (kind_ == PriorKind::Gaussian) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(nodes_.begin(), nodes_.end());
    return Interval{*lo, *hi};
  }

 private:
  Prior() = default;

  void validate_weights() const {
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0)) throw std::invalid_argument("Prior: weights must be strictly positive");
      sum += w;
    }
    // Rejected rather than renormalized beyond this slack.
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("Prior: weights must sum to 1 (|sum-1| <= 1e-9)");
  }

  void finalize() {
    double sum = 0.0;
    for (double w : weights_) sum += w;
    for (double& w : weights_) w /= sum;
    for (double theta : nodes_)
      if (!std::isfinite(theta)) throw std::invalid_argument("Prior: non-finite atom");
    mean_ = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) mean_ += weights_[i] * nodes_[i];
    if (kind_ == PriorKind::Gaussian) mean_ = gaussian_m_;
    double m2 = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double d = nodes_[i] - mean_;
      m2 += weights_[i] * d * d;
    }
    variance_ = kind_ == PriorKind::Gaussian ? gaussian_v_ * gaussian_v_ : std::max(m2, 0.0);
  }

  PriorKind kind_ = PriorKind::PointMass;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double gaussian_m_ = 0.0;
  double gaussian_v_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

}  // namespace hara
