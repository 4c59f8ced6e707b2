// HARA utility families, market parameters, and evaluation points.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace hara {

struct MarketParams {
  double r = 0.0;      // risk-free rate, >= 0
  double sigma = 0.0;  // volatility, > 0
  double T = 0.0;      // horizon, > 0

  void validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("MarketParams: sigma must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("MarketParams: T must be positive");
    if (r < 0.0) throw std::invalid_argument("MarketParams: r must be nonnegative");
  }
};

// u_γ(x) = (1-γ)/γ (βx/(1-γ)+η)^γ on D_γ = {βx/(1-γ)+η > 0}.
struct PowerUtility {
  double gamma = 0.0;
  double beta = 1.0;
  double eta = 0.0;

  void validate() const {
    if (!(gamma < 1.0) || gamma == 0.0)
      throw std::invalid_argument("PowerUtility: gamma must satisfy gamma < 1, gamma != 0");
    if (!(beta > 0.0)) throw std::invalid_argument("PowerUtility: beta must be positive");
  }
};

// u_log(x) = ln(βx+η) on D_log = {βx+η > 0}.
struct LogUtility {
  double beta = 1.0;
  double eta = 0.0;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("LogUtility: beta must be positive");
  }
};

// u_exp(x) = -e^{-βx} on all of R.
struct ExpUtility {
  double beta = 1.0;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("ExpUtility: beta must be positive");
  }
};

using UtilitySpec = std::variant<PowerUtility, LogUtility, ExpUtility>;

inline void validate(const UtilitySpec& u) {
  std::visit([](const auto& v) { v.validate(); }, u);
}

inline bool in_domain(const UtilitySpec& u, double x) {
  return std::visit(
      [x](const auto& v) -> bool {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerUtility>)
          return v.beta * x / (1.0 - v.gamma) + v.eta > 0.0;
        else if constexpr (std::is_same_v<V, LogUtility>)
          return v.beta * x + v.eta > 0.0;
        else
          return true;
      },
      u);
}

inline double evaluate(const UtilitySpec& u, double x) {
  return std::visit(
      [x](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerUtility>) {
          const double base = v.beta * x / (1.0 - v.gamma) + v.eta;
          if (!(base > 0.0)) throw std::domain_error("utility: x outside D_gamma");
          return (1.0 - v.gamma) / v.gamma * std::pow(base, v.gamma);
        } else if constexpr (std::is_same_v<V, LogUtility>) {
          const double base = v.beta * x + v.eta;
          if (!(base > 0.0)) throw std::domain_error("utility: x outside D_log");
          return std::log(base);
        } else {
          return -std::exp(-v.beta * x);
        }
      },
      u);
}

// Inverse of u_i at a utility level.
inline double certainty_equivalent(const UtilitySpec& u, double value) {
  return std::visit(
      [value](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerUtility>) {
          const double g = v.gamma;
          const double base = std::pow(value * g / (1.0 - g), 1.0 / g);
          return (1.0 - g) / v.beta * (base - v.eta);
        } else if constexpr (std::is_same_v<V, LogUtility>) {
          return (std::exp(value) - v.eta) / v.beta;
        } else {
          if (!(value < 0.0)) throw std::domain_error("certainty_equivalent: exp utility is negative");
          return -std::log(-value) / v.beta;
        }
      },
      u);
}

struct EvalPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Admissibility of the evaluation point: x e^{r(T-t)} must lie in D_i.
inline void require_admissible(const UtilitySpec& u, const MarketParams& mkt, const EvalPoint& pt) {
  if (pt.t < 0.0 || pt.t > mkt.T) throw std::domain_error("EvalPoint: t outside [0, T]");
  const double forward = pt.x * std::exp(mkt.r * (mkt.T - pt.t));
  if (!in_domain(u, forward))
    throw std::domain_error("EvalPoint: x e^{r(T-t)} outside the utility domain");
}

}  // namespace hara
