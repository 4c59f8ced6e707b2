// Gauss-type quadrature rules and log-space summation helpers.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hara {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Hermite rule for ∫ f(x) e^{-x²} dx (physicists' convention).
// Newton iteration on the Hermite recurrence; nodes in ascending order.
inline QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  constexpr double kEps = 1e-14;
  constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}
  constexpr int kMaxIter = 200;

  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[n - 2];
    } else {
      z = 2.0 * z - rule.nodes[n - i + 1];
    }
    double pp = 0.0;
    int it = 0;
    for (; it < kMaxIter; ++it) {
      double p1 = kPiQuarterInv;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps) break;
    }
    if (it >= kMaxIter) throw std::runtime_error("gauss_hermite: Newton iteration failed");
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[n - 1 - i] = 2.0 / (pp * pp);
    rule.weights[i] = rule.weights[n - 1 - i];
  }
  return rule;
}

// Gauss-Legendre rule on [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: empty interval");
  constexpr double kEps = 1e-14;
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps) break;
    }
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

// Quadrature for ∫ g(z) φ_{s²}(z) dz with φ the centered normal density of
// variance s². Weights sum to 1; polynomials up to degree 2n-1 are exact.
struct ZQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  double variance = 0.0;

  template <typename G>
  double integrate(G&& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(nodes[i]);
    return acc;
  }
};

inline ZQuadrature gauss_hermite_z(double variance, int n) {
  if (!(variance > 0.0))
    throw std::domain_error("degenerate kernel; use boundary value");
  if (n < 2) throw std::invalid_argument("gauss_hermite_z: need n >= 2");
  const QuadratureRule gh = gauss_hermite(n);
  ZQuadrature zq;
  zq.variance = variance;
  zq.nodes.resize(n);
  zq.weights.resize(n);
  const double scale = std::sqrt(2.0 * variance);
  const double wnorm = 1.0 / std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    zq.nodes[i] = scale * gh.nodes[i];
    zq.weights[i] = wnorm * gh.weights[i];
  }
  return zq;
}

// Centered normal density with the given variance.
inline double normal_pdf(double z, double variance) {
  return std::exp(-z * z / (2.0 * variance)) / std::sqrt(2.0 * M_PI * variance);
}

// log Σ e^{l_i}, max-subtracted.
inline double log_sum_exp(std::span<const double> logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double l : logs) {
    if (std::isnan(l)) throw std::domain_error("log_sum_exp: NaN term");
    if (l > mx) mx = l;
  }
  if (mx == -std::numeric_limits<double>::infinity())
    throw std::domain_error("log_sum_exp: all terms are -inf");
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - mx);
  return mx + std::log(acc);
}

// Deterministic pairwise sum; order-independent of accumulation rounding drift.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace hara
