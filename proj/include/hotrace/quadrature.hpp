#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "hotrace/errors.hpp"

namespace hotrace {

/// Gauss-Legendre nodes and weights on [-1, 1]. Immutable once built.
class QuadratureRule {
 public:
  /// Builds the n-point rule by Newton iteration on P_n in long double.
  static QuadratureRule gauss_legendre(int order) {
    if (order < 1) throw DomainError("gauss_legendre: order must be positive");
    QuadratureRule rule;
    rule.order_ = order;
    rule.nodes_.assign(static_cast<std::size_t>(order), 0.0);
    rule.weights_.assign(static_cast<std::size_t>(order), 0.0);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
      long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (order + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L, p1 = z;
        for (int k = 1; k < order; ++k) {
          const long double p2 = ((2 * k + 1) * z * p1 - k * p0) / (k + 1);
          p0 = p1;
          p1 = p2;
        }
        dp = order * (z * p1 - p0) / (z * z - 1.0L);
        const long double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-19L) break;
      }
      {
        // Final derivative at the converged node.
        long double p0 = 1.0L, p1 = z;
        for (int k = 1; k < order; ++k) {
          const long double p2 = ((2 * k + 1) * z * p1 - k * p0) / (k + 1);
          p0 = p1;
          p1 = p2;
        }
        dp = order * (z * p1 - p0) / (z * z - 1.0L);
      }
      const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
      const auto lo = static_cast<std::size_t>(i);
      const auto hi = static_cast<std::size_t>(order - 1 - i);
      rule.nodes_[lo] = static_cast<double>(-z);
      rule.nodes_[hi] = static_cast<double>(z);
      rule.weights_[lo] = static_cast<double>(w);
      rule.weights_[hi] = static_cast<double>(w);
    }
    if (order % 2 == 1) rule.nodes_[static_cast<std::size_t>(order / 2)] = 0.0;
    return rule;
  }

  int order() const { return order_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral of f over [a, b]. The result type follows f.
  template <typename F>
  auto integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    using R = decltype(f(mid));
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weights_[i] * f(mid + half * nodes_[i]);
    }
    return sum * half;
  }

  /// Integral over [a, b] split into equal panels.
  template <typename F>
  auto integrate_panels(F&& f, double a, double b, int panels) const {
    const double width = (b - a) / panels;
    using R = decltype(f(a));
    R sum{};
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * width;
      const double hi = (p + 1 == panels) ? b : lo + width;
      sum += integrate(f, lo, hi);
    }
    return sum;
  }

 private:
  QuadratureRule() = default;

  int order_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Process-wide cache of Gauss-Legendre rules, safe for concurrent callers.
inline const QuadratureRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(QuadratureRule::gauss_legendre(order));
  return *slot;
}

}  // namespace hotrace
