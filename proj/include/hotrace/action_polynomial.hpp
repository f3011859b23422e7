#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hotrace/errors.hpp"
#include "hotrace/rational.hpp"
#include "hotrace/special_functions.hpp"
#include "hotrace/system_params.hpp"

namespace hotrace {

/// First-order action shift as a polynomial in the scaled angular momentum:
/// Delta S(l) = -sigma * sum_j coeffs[j] * l^{2j}, with l in [0, 1].
struct ActionPolynomial {
  int alpha = 0;
  std::vector<double> coeffs;

  /// sum_j a_j l^{2j}
  double value(double l) const {
    const double l2 = l * l;
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * l2 + *it;
    return acc;
  }

  /// d/dl of value(l).
  double derivative(double l) const {
    const double l2 = l * l;
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 1;) acc = acc * l2 + 2.0 * static_cast<double>(j) * coeffs[j];
    return acc * l;
  }

  /// sum_{j>=1} a_j, the phase swing between the diameter and circular orbits.
  double tail_sum() const {
    double s = 0.0;
    for (std::size_t j = 1; j < coeffs.size(); ++j) s += coeffs[j];
    return s;
  }

  /// sum_{j>=1} 2 j a_j = d value / d l at l = 1.
  double tail_slope() const {
    double s = 0.0;
    for (std::size_t j = 1; j < coeffs.size(); ++j) s += 2.0 * static_cast<double>(j) * coeffs[j];
    return s;
  }

  double a(std::size_t j) const { return j < coeffs.size() ? coeffs[j] : 0.0; }
};

/// Exact-rational form of the coefficients for a monomial of order alpha.
struct ExactActionPolynomial {
  int alpha = 0;
  std::vector<Rational> coeffs;

  ActionPolynomial to_double() const {
    ActionPolynomial p{alpha, {}};
    p.coeffs.reserve(coeffs.size());
    for (const auto& c : coeffs) p.coeffs.push_back(hotrace::to_double(c));
    return p;
  }

  /// Common denominator of all coefficients.
  BigInt common_denominator() const {
    BigInt den = 1;
    for (const auto& c : coeffs) {
      const BigInt d = boost::multiprecision::denominator(c);
      den = den / boost::multiprecision::gcd(den, d) * d;
    }
    return den;
  }
};

/// Characteristic action scale sigma_alpha = epsilon 2 pi E^alpha / omega^{2 alpha + 1}.
struct ScaledActionStrength {
  double sigma = 0.0;
};

// ---------------------------------------------------------------------------
// Coefficient construction
// ---------------------------------------------------------------------------

/// Orbit-average weight of a^{2k} b^{2alpha-2k}:
/// I = alpha! (2k-1)!! (2alpha-2k-1)!! / (k! (alpha-k)! (2alpha)!!).
inline Rational i_coefficient(int alpha, int k) {
  if (alpha < 1) throw DomainError("i_coefficient: alpha must be >= 1");
  if (k < 0 || k > alpha) {
    throw DomainError("i_coefficient: k=" + std::to_string(k) + " outside [0, " +
                      std::to_string(alpha) + "]");
  }
  const BigInt num =
      factorial(alpha) * double_factorial(2 * k - 1) * double_factorial(2 * alpha - 2 * k - 1);
  const BigInt den = factorial(k) * factorial(alpha - k) * double_factorial(2 * alpha);
  return Rational(num, den);
}

/// K = C(k,l) C(alpha-k,p) [(-1)^l + (-1)^p]; vanishes when l and p differ in parity.
inline BigInt k_coefficient(int alpha, int k, int l, int p) {
  if (k < 0 || k > alpha || l < 0 || l > k || p < 0 || p > alpha - k) {
    throw DomainError("k_coefficient: index out of range (alpha=" + std::to_string(alpha) +
                      ", k=" + std::to_string(k) + ", l=" + std::to_string(l) +
                      ", p=" + std::to_string(p) + ")");
  }
  const int bracket = (l % 2 == 0 ? 1 : -1) + (p % 2 == 0 ? 1 : -1);
  if (bracket == 0) return 0;
  return binomial(k, l) * binomial(alpha - k, p) * bracket;
}

namespace detail {

/// Builds the coefficients from the double-factorial orbit average. With
/// a^2, b^2 = R0^2 (1 +- s)/2 and s^2 = 1 - l^2, the symmetric pair
/// a^{2k}b^{2a-2k} + a^{2a-2k}b^{2k} expands as (R0^2/2)^alpha sum K s^{l+p};
/// the self-paired middle term (alpha even) is (R0^2/2)^alpha l^alpha.
/// Everything is carried over the common denominator (2 alpha)!!.
inline ExactActionPolynomial build_action_coefficients(int alpha) {
  const int terms = alpha / 2 + 1;
  const int pair_last = (alpha % 2 == 1) ? alpha / 2 : alpha / 2 - 1;

  // sum over k of N_k * (coefficient of s^{2m} in the pair expansion)
  std::vector<BigInt> s_poly(static_cast<std::size_t>(terms), BigInt(0));
  std::vector<BigInt> row_k, row_rest;
  for (int k = 0; k <= pair_last; ++k) {
    const BigInt weight =
        binomial(alpha, k) * double_factorial(2 * k - 1) * double_factorial(2 * alpha - 2 * k - 1);
    row_k.resize(static_cast<std::size_t>(k) + 1);
    row_rest.resize(static_cast<std::size_t>(alpha - k) + 1);
    for (int l = 0; l <= k; ++l) row_k[static_cast<std::size_t>(l)] = binomial(k, l);
    for (int p = 0; p <= alpha - k; ++p) row_rest[static_cast<std::size_t>(p)] = binomial(alpha - k, p);
    std::vector<BigInt> pair(static_cast<std::size_t>(terms), BigInt(0));
    for (int l = 0; l <= k; ++l) {
      for (int p = l % 2; p <= alpha - k; p += 2) {
        BigInt prod = row_k[static_cast<std::size_t>(l)] * row_rest[static_cast<std::size_t>(p)];
        if (l % 2 == 0) pair[static_cast<std::size_t>((l + p) / 2)] += prod;
        else pair[static_cast<std::size_t>((l + p) / 2)] -= prod;
      }
    }
    for (int m = 0; m < terms; ++m) {
      s_poly[static_cast<std::size_t>(m)] += 2 * weight * pair[static_cast<std::size_t>(m)];
    }
  }

  // s^{2m} = (1 - l^2)^m  ->  coefficients of l^{2j}
  std::vector<BigInt> numer(static_cast<std::size_t>(terms), BigInt(0));
  for (int m = 0; m < terms; ++m) {
    const BigInt& c = s_poly[static_cast<std::size_t>(m)];
    if (c == 0) continue;
    for (int j = 0; j <= m; ++j) {
      BigInt t = c * binomial(m, j);
      if (j % 2 == 0) numer[static_cast<std::size_t>(j)] += t;
      else numer[static_cast<std::size_t>(j)] -= t;
    }
  }
  if (alpha % 2 == 0) {
    const int k = alpha / 2;
    numer[static_cast<std::size_t>(k)] +=
        binomial(alpha, k) * double_factorial(2 * k - 1) * double_factorial(2 * alpha - 2 * k - 1);
  }

  const BigInt den = double_factorial(2 * alpha);
  ExactActionPolynomial result{alpha, {}};
  result.coeffs.reserve(static_cast<std::size_t>(terms));
  for (const auto& n : numer) result.coeffs.emplace_back(n, den);
  return result;
}

}  // namespace detail

/// Exact coefficients a_0..a_{alpha/2}; computed once per alpha and cached.
inline const ExactActionPolynomial& action_coefficients(int alpha) {
  if (alpha < 1) throw DomainError("action_coefficients: alpha must be >= 1");
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<const ExactActionPolynomial>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(alpha); it != cache.end()) return *it->second;
  }
  auto built = std::make_unique<const ExactActionPolynomial>(detail::build_action_coefficients(alpha));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(alpha, std::move(built));
  return *it->second;
}

inline ActionPolynomial action_polynomial(int alpha) { return action_coefficients(alpha).to_double(); }

/// Coefficients of l^alpha P_alpha(1/l) in powers of l^2, read off the
/// power-basis table of P_alpha: a_j is the coefficient of x^{alpha-2j}.
inline std::vector<Rational> legendre_form_coefficients(const std::vector<Rational>& p_alpha, int alpha) {
  std::vector<Rational> out;
  for (int j = 0; j <= alpha / 2; ++j) out.push_back(p_alpha[static_cast<std::size_t>(alpha - 2 * j)]);
  return out;
}

struct LegendreCheck {
  int alpha = 0;
  bool pass = false;
  std::optional<int> first_mismatch;  // index j of the first differing coefficient
};

/// Exact comparison of the orbit-average coefficients with l^alpha P_alpha(1/l)
/// for alpha = 1..alpha_max. A mismatch is reported, not thrown.
inline std::vector<LegendreCheck> verify_legendre_form(int alpha_max) {
  if (alpha_max < 1) throw DomainError("verify_legendre_form: alpha_max must be >= 1");
  const auto table = legendre_coefficient_table<Rational>(alpha_max);
  std::vector<LegendreCheck> report;
  report.reserve(static_cast<std::size_t>(alpha_max));
  for (int alpha = 1; alpha <= alpha_max; ++alpha) {
    const auto expected = legendre_form_coefficients(table[static_cast<std::size_t>(alpha)], alpha);
    const auto& got = action_coefficients(alpha).coeffs;
    LegendreCheck check{alpha, true, std::nullopt};
    if (got.size() != expected.size()) {
      check.pass = false;
      check.first_mismatch = 0;
    } else {
      for (std::size_t j = 0; j < got.size(); ++j) {
        if (got[j] != expected[j]) {
          check.pass = false;
          check.first_mismatch = static_cast<int>(j);
          break;
        }
      }
    }
    report.push_back(check);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Action scale and evaluation
// ---------------------------------------------------------------------------

inline ScaledActionStrength sigma_alpha(double energy, double epsilon, int alpha, double omega) {
  if (energy < 0.0) throw DomainError("sigma_alpha: energy must be non-negative");
  if (!(omega > 0.0)) throw DomainError("sigma_alpha: omega must be positive");
  if (alpha < 1) throw DomainError("sigma_alpha: alpha must be >= 1");
  return {epsilon * 2.0 * std::numbers::pi * std::pow(energy, alpha) / std::pow(omega, 2 * alpha + 1)};
}

namespace detail {
inline double checked_ltilde(double l) {
  constexpr double slack = 1e-12;
  if (!(l >= -slack && l <= 1.0 + slack)) {
    throw DomainError("scaled angular momentum must lie in [0, 1], got " + std::to_string(l));
  }
  return std::clamp(l, 0.0, 1.0);
}
}  // namespace detail

/// Delta S(l) = -sigma sum_j a_j l^{2j}.
inline double delta_s(const ActionPolynomial& poly, ScaledActionStrength sigma, double ltilde) {
  return -sigma.sigma * poly.value(detail::checked_ltilde(ltilde));
}

/// omega_eff = sqrt(omega^2 + 2 sum epsilon_j) over the alpha = 1 terms.
inline double effective_frequency(const SystemParams& params) {
  double radicand = params.omega * params.omega;
  for (const auto& t : params.terms) {
    if (t.alpha == 1) radicand += 2.0 * t.epsilon;
  }
  if (!(radicand > 0.0)) {
    throw DomainError("effective_frequency: omega^2 + 2 epsilon <= 0 (inverted trap)");
  }
  return std::sqrt(radicand);
}

/// Combined first-order action of a polynomial perturbation at energy E:
/// Delta S(l) = -sum_j coeffs[j] l^{2j}, coefficients in action units. Harmonic
/// (alpha = 1) terms are absorbed into omega_eff and the remaining terms are
/// averaged over orbits of the re-parametrized oscillator.
struct PolynomialAction {
  double omega_eff = 1.0;
  int max_alpha = 0;
  std::vector<double> coeffs;

  double delta_s(double ltilde) const {
    const ActionPolynomial p{max_alpha, coeffs};
    return -p.value(detail::checked_ltilde(ltilde));
  }

  /// Constant (diameter-orbit) part of -Delta S.
  double offset() const { return coeffs.empty() ? 0.0 : coeffs.front(); }

  /// The polynomial in action units; pair with sigma = 1 (so sigma/hbar = 1/hbar).
  ActionPolynomial as_polynomial() const { return {max_alpha, coeffs}; }
};

inline PolynomialAction polynomial_delta_s(const SystemParams& params, double energy) {
  params.validate();
  if (!(energy > 0.0)) throw DomainError("polynomial_delta_s: energy must be positive");
  PolynomialAction out;
  out.omega_eff = effective_frequency(params);
  for (const auto& t : params.terms) {
    if (t.alpha < 2) continue;
    const auto& exact = action_coefficients(t.alpha);
    const double sigma = sigma_alpha(energy, t.epsilon, t.alpha, out.omega_eff).sigma;
    if (exact.coeffs.size() > out.coeffs.size()) out.coeffs.resize(exact.coeffs.size(), 0.0);
    for (std::size_t j = 0; j < exact.coeffs.size(); ++j) out.coeffs[j] += sigma * to_double(exact.coeffs[j]);
    out.max_alpha = std::max(out.max_alpha, t.alpha);
  }
  if (out.coeffs.empty()) out.coeffs.push_back(0.0);
  return out;
}

}  // namespace hotrace
