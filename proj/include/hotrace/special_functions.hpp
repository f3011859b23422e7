#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hotrace/errors.hpp"
#include "hotrace/rational.hpp"

namespace hotrace {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Factorial family
// ---------------------------------------------------------------------------

/// n!! = n(n-2)(n-4)..., with the conventions (-1)!! = 0!! = 1.
inline BigInt double_factorial(int n) {
  if (n < -1) {
    throw DomainError("double_factorial: n must be >= -1, got " + std::to_string(n));
  }
  BigInt result = 1;
  for (int m = n; m > 1; m -= 2) result *= m;
  return result;
}

inline BigInt factorial(int n) {
  if (n < 0) throw DomainError("factorial: negative argument " + std::to_string(n));
  BigInt result = 1;
  for (int m = 2; m <= n; ++m) result *= m;
  return result;
}

/// Binomial coefficient; zero outside 0 <= k <= n.
inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int j = 1; j <= k; ++j) {
    result *= n - k + j;
    result /= j;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Legendre polynomials
// ---------------------------------------------------------------------------

/// P_n(x) by the three-term recurrence. Works for double and for Rational
/// (exact), or any field type constructible from int.
template <typename T>
T legendre_p(int n, const T& x) {
  if (n < 0) throw DomainError("legendre_p: negative degree");
  T prev(1);
  if (n == 0) return prev;
  T curr = x;
  for (int k = 1; k < n; ++k) {
    T next = (T(2 * k + 1) * x * curr - T(k) * prev) / T(k + 1);
    prev = std::move(curr);
    curr = std::move(next);
  }
  return curr;
}

/// P'_n(x) through P'_{k+1} = P'_{k-1} + (2k+1) P_k; regular at x = +-1.
inline double legendre_p_derivative(int n, double x) {
  if (n < 0) throw DomainError("legendre_p_derivative: negative degree");
  if (n == 0) return 0.0;
  double p_prev = 1.0, p_curr = x;      // P_0, P_1
  double d_prev = 0.0, d_curr = 1.0;    // P'_0, P'_1
  for (int k = 1; k < n; ++k) {
    const double d_next = d_prev + (2 * k + 1) * p_curr;
    const double p_next = ((2 * k + 1) * x * p_curr - k * p_prev) / (k + 1);
    d_prev = d_curr;
    d_curr = d_next;
    p_prev = p_curr;
    p_curr = p_next;
  }
  return d_curr;
}

/// Power-basis coefficients of P_0 .. P_{n_max}; entry [n][m] multiplies x^m.
template <typename T>
std::vector<std::vector<T>> legendre_coefficient_table(int n_max) {
  if (n_max < 0) throw DomainError("legendre_coefficient_table: negative degree");
  std::vector<std::vector<T>> table;
  table.reserve(static_cast<std::size_t>(n_max) + 1);
  table.push_back({T(1)});
  if (n_max == 0) return table;
  table.push_back({T(0), T(1)});
  for (int k = 1; k < n_max; ++k) {
    const auto& pk = table[k];
    const auto& pkm1 = table[k - 1];
    std::vector<T> next(static_cast<std::size_t>(k) + 2, T(0));
    const T a = T(2 * k + 1) / T(k + 1);
    const T b = T(k) / T(k + 1);
    for (std::size_t m = 0; m < pk.size(); ++m) {
      if (pk[m] != T(0)) next[m + 1] += a * pk[m];
    }
    for (std::size_t m = 0; m < pkm1.size(); ++m) {
      if (pkm1[m] != T(0)) next[m] -= b * pkm1[m];
    }
    table.push_back(std::move(next));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Confluent hypergeometric 1F1(1; b; z)
// ---------------------------------------------------------------------------

namespace detail {

constexpr long kKummerIterationCap = 100000;
constexpr double kKummerSeriesRadius = 4.0;

template <typename Real>
struct ComplexOf {
  Real re, im;
};

/// Maclaurin series of 1F1(1;b;z) evaluated in the floating type Real. Stops
/// after three consecutive terms below 1e-16 |sum|.
template <typename Real>
Complex kummer_series(double b, Complex z) {
  const Real zr = z.real(), zi = z.imag();
  Real tr = 1, ti = 0;
  Real sr = 1, si = 0;
  int small_run = 0;
  for (long n = 0; n < kKummerIterationCap; ++n) {
    const Real denom = Real(b) + Real(n);
    const Real nr = (tr * zr - ti * zi) / denom;
    const Real ni = (tr * zi + ti * zr) / denom;
    tr = nr;
    ti = ni;
    sr += tr;
    si += ti;
    const Real term2 = tr * tr + ti * ti;
    const Real sum2 = sr * sr + si * si;
    if (term2 < Real(1e-32) * sum2) {
      if (++small_run >= 3) {
        return {static_cast<double>(sr), static_cast<double>(si)};
      }
    } else {
      small_run = 0;
    }
  }
  std::ostringstream msg;
  msg << "kummer_1f1: series did not converge after " << kKummerIterationCap
      << " terms (b=" << b << ", z=" << z << ", partial sum=" << static_cast<double>(sr) << "+"
      << static_cast<double>(si) << "i)";
  throw NumericError(msg.str());
}

/// Large-|z| expansion: Gamma(b) e^z z^{1-b} - (b-1)/z * sum_s (2-b)_s (-1/z)^s.
/// The algebraic series terminates for integer b and is truncated at its
/// smallest term otherwise.
inline Complex kummer_asymptotic(double b, Complex z) {
  const Complex minus_inv_z = -1.0 / z;
  Complex term = 1.0;
  Complex sum = 1.0;
  double last_mag = 1.0;
  for (int s = 0; s < 2000; ++s) {
    const double factor = (2.0 - b) + s;
    if (factor == 0.0) break;
    const Complex next = term * factor * minus_inv_z;
    const double mag = std::abs(next);
    if (mag >= last_mag) break;  // asymptotic: stop at the smallest term
    term = next;
    sum += term;
    last_mag = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  const Complex exponential = std::tgamma(b) * std::exp(z) * std::pow(z, 1.0 - b);
  return exponential - (b - 1.0) / z * sum;
}

}  // namespace detail

/// 1F1(1; b; z) for real b > 0 and complex z.
///
/// Small |z| sums the series in double. For moderate |z| the same series is
/// summed in 100-digit binary floating point, since for imaginary z the terms
/// grow like e^{|z|} before cancelling. Large |z| (relative to b) uses the
/// algebraic/exponential asymptotic expansion whose truncation error is
/// ~e^{-|z|}.
inline Complex kummer_1f1(double b, Complex z) {
  if (!(b > 0.0)) {
    std::ostringstream msg;
    msg << "kummer_1f1: b must be positive, got " << b;
    throw DomainError(msg.str());
  }
  const double r = std::abs(z);
  if (!std::isfinite(r)) throw DomainError("kummer_1f1: non-finite argument");
  if (r == 0.0) return 1.0;
  if (r <= detail::kKummerSeriesRadius) return detail::kummer_series<double>(b, z);
  if (r > 40.0 + 2.0 * b) return detail::kummer_asymptotic(b, z);
  if (r <= 150.0) {
    return detail::kummer_series<boost::multiprecision::cpp_bin_float_100>(b, z);
  }
  std::ostringstream msg;
  msg << "kummer_1f1: argument out of supported range (b=" << b << ", |z|=" << r << ")";
  throw NumericError(msg.str());
}

// ---------------------------------------------------------------------------
// erf on the ray sqrt(i x), Fresnel integrals
// ---------------------------------------------------------------------------

namespace detail {

inline Complex erf_taylor(Complex w) {
  // erf(w) = 2/sqrt(pi) sum_n (-1)^n w^{2n+1} / (n! (2n+1))
  const Complex minus_w2 = -w * w;
  Complex term = w;
  Complex sum = w;
  for (int n = 1; n < 500; ++n) {
    term *= minus_w2 / static_cast<double>(n);
    const Complex contrib = term / static_cast<double>(2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

/// erfc(w) for Re w > 0 through the Laplace continued fraction
/// erfc(w) = e^{-w^2}/sqrt(pi) * 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + ...)))),
/// evaluated by the modified Lentz algorithm.
inline Complex erfc_continued_fraction(Complex w) {
  constexpr double tiny = 1e-300;
  Complex f = w;  // b0
  Complex c = f;
  Complex d = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double a = 0.5 * j;
    d = w + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = w + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return std::exp(-w * w) / (std::sqrt(std::numbers::pi) * f);
    }
  }
  throw NumericError("erfc continued fraction did not converge");
}

}  // namespace detail

/// erf(sqrt(i x)) for x >= 0, principal square root (argument pi/4).
inline Complex erf_sqrt_i(double x) {
  if (!(x >= 0.0)) throw DomainError("erf_sqrt_i: x must be non-negative");
  if (x == 0.0) return 0.0;
  const double t = std::sqrt(0.5 * x);
  const Complex w(t, t);
  if (x <= 4.0) return detail::erf_taylor(w);
  return 1.0 - detail::erfc_continued_fraction(w);
}

/// erf(sqrt(i y)) for real y of either sign; y < 0 maps to the conjugate ray.
inline Complex erf_sqrt_i_signed(double y) {
  return y >= 0.0 ? erf_sqrt_i(y) : std::conj(erf_sqrt_i(-y));
}

/// erf(w)/w with w = sqrt(i y); even in w, so the branch is immaterial.
inline Complex erf_over_arg_sqrt_i(double y) {
  if (std::abs(y) < 1e-8) {
    // 2/sqrt(pi) (1 - w^2/3 + w^4/10), w^2 = i y
    const Complex w2(0.0, y);
    return 2.0 / std::sqrt(std::numbers::pi) * (1.0 - w2 / 3.0 + w2 * w2 / 10.0);
  }
  const double t = std::sqrt(0.5 * std::abs(y));
  const Complex w = y >= 0.0 ? Complex(t, t) : Complex(t, -t);
  return erf_sqrt_i_signed(y) / w;
}

/// Fresnel integrals C(v) = int_0^v cos(pi s^2/2) ds and S(v) likewise with sin.
/// Uses erf(e^{i pi/4} t) = (1+i)(C(v) - i S(v)), t = v sqrt(pi/2).
inline std::pair<double, double> fresnel_cs(double v) {
  const double sign = v < 0.0 ? -1.0 : 1.0;
  const double av = std::abs(v);
  const Complex cs = erf_sqrt_i(0.5 * std::numbers::pi * av * av) / Complex(1.0, 1.0);
  return {sign * cs.real(), -sign * cs.imag()};
}

}  // namespace hotrace
