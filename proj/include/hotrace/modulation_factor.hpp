#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hotrace/action_polynomial.hpp"
#include "hotrace/errors.hpp"
#include "hotrace/quadrature.hpp"
#include "hotrace/special_functions.hpp"

namespace hotrace {

enum class ModulationMethod { quadrature, closed_form, spa };

inline const char* to_string(ModulationMethod m) {
  switch (m) {
    case ModulationMethod::quadrature: return "quadrature";
    case ModulationMethod::closed_form: return "closed_form";
    case ModulationMethod::spa: return "spa";
  }
  return "?";
}

struct ModulationFactor {
  int k = 1;
  Complex value{1.0, 0.0};
  ModulationMethod method = ModulationMethod::quadrature;
  double sigma_over_hbar = 0.0;
};

namespace detail {

inline void check_modulation_args(int dimension, int k, double sigma_over_hbar) {
  if (dimension < 2) throw DomainError("modulation factor: D must be >= 2");
  if (k == 0) throw DomainError("modulation factor: k must be nonzero");
  if (!std::isfinite(sigma_over_hbar)) throw DomainError("modulation factor: non-finite sigma/hbar");
}

/// Coefficient list with trailing zeros removed.
inline std::vector<double> trimmed(const ActionPolynomial& poly) {
  std::vector<double> c = poly.coeffs;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

/// Spread of poly.value over [0, 1]; sampled, so exact only for monotone polynomials
/// but adequate for choosing a panel count.
inline double value_range(const ActionPolynomial& poly) {
  constexpr int samples = 64;
  double lo = poly.value(0.0), hi = lo;
  for (int i = 1; i <= samples; ++i) {
    const double v = poly.value(static_cast<double>(i) / samples);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

}  // namespace detail

/// Panel count for an oscillatory integrand whose phase changes by `swing`
/// radians: keeps each panel to one full turn per 10 nodes of the half-order
/// rule, so the order-halving error estimate is itself resolved.
inline int panel_count(double swing, int order) {
  const double per_panel = 2.0 * std::numbers::pi * std::max(1, order / 2) / 10.0;
  const double n = std::ceil(std::abs(swing) / per_panel);
  if (!(n < 1e7)) throw DomainError("panel_count: phase swing too large for quadrature");
  return std::max(1, static_cast<int>(n));
}

/// M_k = (D-1) int_0^1 l^{D-2} exp(-i k (sigma/hbar) value(l)) dl by
/// Gauss-Legendre with panel splitting. The error estimate compares the
/// result with the half-order rule on the same panels.
inline ModulationFactor modulation_quadrature(const ActionPolynomial& poly, double sigma_over_hbar, int dimension,
                                              int k, int order = 200) {
  detail::check_modulation_args(dimension, k, sigma_over_hbar);
  if (order < 2) throw DomainError("modulation_quadrature: order must be >= 2");
  const double x = k * sigma_over_hbar;
  const int power = dimension - 2;
  auto integrand = [&](double l) {
    const double weight = power == 0 ? 1.0 : std::pow(l, power);
    return weight * std::polar(1.0, -x * poly.value(l));
  };
  const int panels = panel_count(x * detail::value_range(poly), order);
  const auto& fine = gauss_legendre(order);
  const auto& coarse = gauss_legendre(order / 2);
  const Complex m = static_cast<double>(dimension - 1) * fine.integrate_panels(integrand, 0.0, 1.0, panels);
  const Complex m_coarse =
      static_cast<double>(dimension - 1) * coarse.integrate_panels(integrand, 0.0, 1.0, panels);
  const double err = std::abs(m - m_coarse);
  if (err > 1e-8 * std::max(1.0, std::abs(m))) {
    std::ostringstream msg;
    msg << "modulation_quadrature: estimated error " << err << " at k*sigma/hbar=" << x << " with order " << order
        << " and " << panels << " panels; raise the order";
    throw AccuracyError(msg.str());
  }
  return {k, m, ModulationMethod::quadrature, sigma_over_hbar};
}

enum class ClosedFormVariant { hypergeometric, elementary };

/// Closed form for two-coefficient polynomials (alpha = 2, 3):
/// e^{-ix(a0+a1)} [1 + 2z/(D+1) + 4 z^2 1F1(1;(D+5)/2;z)/((D+1)(D+3))], z = i x a1,
/// evaluated as e^{-ix(a0+a1)} 1F1(1;(D+1)/2;z).
/// The elementary variant uses the exponential/erf expressions for D = 2..7.
inline ModulationFactor modulation_closed_form(const ActionPolynomial& poly, double sigma_over_hbar, int dimension,
                                               int k, ClosedFormVariant variant = ClosedFormVariant::hypergeometric) {
  detail::check_modulation_args(dimension, k, sigma_over_hbar);
  const auto c = detail::trimmed(poly);
  if (c.size() != 2 || c[1] == 0.0) {
    throw UnsupportedError("modulation_closed_form: needs exactly two coefficients (alpha 2 or 3), got alpha=" +
                           std::to_string(poly.alpha) + "; use modulation_quadrature");
  }
  const double a0 = c[0], a1 = c[1];
  const double x = k * sigma_over_hbar;
  const double y = x * a1;
  const Complex e0 = std::polar(1.0, -x * a0);
  const Complex e1 = std::polar(1.0, -x * (a0 + a1));
  const Complex i(0.0, 1.0);
  const double d = dimension;

  if (variant == ClosedFormVariant::elementary) {
    if (dimension > 7) {
      throw UnsupportedError("modulation_closed_form: elementary forms exist for D = 2..7 only");
    }
    if (y == 0.0) return {k, e0, ModulationMethod::closed_form, sigma_over_hbar};
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    Complex m;
    switch (dimension) {
      case 2: m = e0 * (0.5 * sqrt_pi) * erf_over_arg_sqrt_i(y); break;
      case 3: m = i / y * (e1 - e0); break;
      case 4: m = 3.0 * i / (4.0 * y) * (2.0 * e1 - sqrt_pi * erf_over_arg_sqrt_i(y) * e0); break;
      case 5: m = 2.0 / (y * y) * ((i * y + 1.0) * e1 - e0); break;
      case 6: m = 5.0 / (8.0 * y * y) * ((4.0 * i * y + 6.0) * e1 - 3.0 * sqrt_pi * erf_over_arg_sqrt_i(y) * e0); break;
      default: m = 3.0 / (y * y * y) * ((i * y * y + 2.0 * y - 2.0 * i) * e1 + 2.0 * i * e0); break;
    }
    return {k, m, ModulationMethod::closed_form, sigma_over_hbar};
  }

  // two steps of 1F1(1;b;z) = 1 + (z/b) 1F1(1;b+1;z) fold the bracket into
  // 1F1(1;(D+1)/2;z); summed in that form the O(|z|) terms never cancel
  const Complex z(0.0, y);
  return {k, e1 * kummer_1f1(0.5 * (d + 1.0), z), ModulationMethod::closed_form, sigma_over_hbar};
}

/// End-point stationary-phase approximation: the circular orbit (l = 1)
/// contributes I1 and the diameter orbit (l = 0) contributes I0.
inline ModulationFactor modulation_spa(const ActionPolynomial& poly, double sigma_over_hbar, int dimension, int k) {
  detail::check_modulation_args(dimension, k, sigma_over_hbar);
  if (poly.alpha < 2 || poly.coeffs.size() < 2) throw DomainError("modulation_spa: alpha must be >= 2");
  const double x = k * sigma_over_hbar;
  const double a1 = poly.coeffs[1];
  const double y = x * a1;
  if (y == 0.0) throw DomainError("modulation_spa: k sigma a1 / hbar must be nonzero");
  const double slope = poly.tail_slope();
  if (slope == 0.0) throw DegenerateError("modulation_spa: sum_j 2 j a_j vanishes");

  const Complex i(0.0, 1.0);
  const Complex upper = i * std::polar(1.0, -x * poly.tail_sum()) / (x * slope);
  const double nu = 0.5 * (dimension - 1);
  // (1/y)^nu on the principal branch; arg(1/y) = -pi for y < 0 is taken as +pi.
  const Complex inv_pow = std::pow(std::abs(y), -nu) * (y < 0.0 ? std::polar(1.0, std::numbers::pi * nu) : Complex(1.0));
  const Complex lower = 0.5 * std::tgamma(nu) * inv_pow * std::polar(1.0, -0.5 * std::numbers::pi * nu);
  const Complex m = static_cast<double>(dimension - 1) * std::polar(1.0, -x * poly.coeffs[0]) * (upper + lower);
  return {k, m, ModulationMethod::spa, sigma_over_hbar};
}

struct StationaryPointAudit {
  int alpha = 0;
  int scan_points = 0;
  bool root_free = false;          // derivative keeps one sign on (0, 1]
  double max_identity_residual = 0.0;  // derivative vs l^{alpha-1} P'_{alpha-1}(1/l), relative
  bool certificate = false;        // all Taylor coefficients of P'_{alpha-1} at x = 1 positive
};

namespace detail {

/// l^{alpha-1} P'_{alpha-1}(1/l) without overflow. With Q_n = l^n P_n(1/l)
/// and R_n = l^n P'_{n+1}(1/l): (n+1) Q_{n+1} = (2n+1) Q_n - n l^2 Q_{n-1},
/// R_n = l^2 R_{n-2} + (2n+1) Q_n.
inline double scaled_legendre_derivative(int alpha, double l) {
  if (alpha < 2) return 0.0;
  const int top = alpha - 2;  // need l * R_top
  const double l2 = l * l;
  double q_prev = 1.0, q = 1.0;  // Q_0 = 1, Q_1 = 1
  double r_prev2 = 0.0, r_prev = 1.0;  // R_{-1} = 0, R_0 = 1
  if (top == 0) return l * r_prev;
  for (int n = 1; n <= top; ++n) {
    const double r = l2 * r_prev2 + (2 * n + 1) * q;
    r_prev2 = r_prev;
    r_prev = r;
    const double q_next = ((2 * n + 1) * q - n * l2 * q_prev) / (n + 1);
    q_prev = q;
    q = q_next;
  }
  return l * r_prev;
}

/// Taylor coefficients of P'_n about x = 1, from the exact power basis.
inline std::vector<Rational> derivative_taylor_at_one(int n) {
  const auto table = legendre_coefficient_table<Rational>(n);
  const auto& p = table[static_cast<std::size_t>(n)];
  std::vector<Rational> d;
  for (std::size_t m = 1; m < p.size(); ++m) d.push_back(p[m] * static_cast<int>(m));
  // shift x -> 1 + t by repeated synthetic division
  const std::size_t deg = d.size();
  for (std::size_t i = 0; i < deg; ++i) {
    for (std::size_t j = deg - 1; j > i; --j) d[j - 1] += d[j];
  }
  return d;
}

}  // namespace detail

/// Checks that the action has no stationary point in (0, 1]. A dense scan of
/// the derivative, a comparison with the Legendre-derivative form, and an
/// exact certificate: P'_{alpha-1}(1 + t) has positive Taylor coefficients,
/// so it cannot vanish for 1/l >= 1.
inline StationaryPointAudit spa_stationary_point_audit(const ActionPolynomial& poly, int scan_points = 100000) {
  if (poly.alpha < 2) throw DomainError("spa_stationary_point_audit: alpha must be >= 2");
  StationaryPointAudit audit;
  audit.alpha = poly.alpha;
  audit.scan_points = scan_points;
  int sign = 0;
  bool flipped = false;
  double flip_at = 0.0;
  for (int i = 1; i <= scan_points; ++i) {
    const double l = static_cast<double>(i) / scan_points;
    const double d = poly.derivative(l);
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      if (!flipped) flip_at = l;
      flipped = true;
    }
    if (sign == 0) sign = s;
    const double ref = detail::scaled_legendre_derivative(poly.alpha, l);
    if (ref != 0.0) {
      audit.max_identity_residual = std::max(audit.max_identity_residual, std::abs(-d - ref) / std::abs(ref));
    }
  }
  audit.root_free = !flipped;

  const auto taylor = detail::derivative_taylor_at_one(poly.alpha - 1);
  audit.certificate = std::all_of(taylor.begin(), taylor.end(), [](const Rational& r) { return r > 0; });

  if (flipped) {
    std::ostringstream msg;
    msg << "spa_stationary_point_audit: derivative vanishes or changes sign near l=" << flip_at << " for alpha="
        << poly.alpha;
    throw PropertyViolation(msg.str());
  }
  return audit;
}

}  // namespace hotrace
