#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hotrace/errors.hpp"
#include "hotrace/quadrature.hpp"
#include "hotrace/roots.hpp"
#include "hotrace/special_functions.hpp"
#include "hotrace/system_params.hpp"

namespace hotrace {

struct TurningPoint {
  double r_max = 0.0;
  double inner = 0.0;
};

struct EbkLevel {
  int n_r = 0;
  int l = 0;
  double energy = 0.0;
  std::int64_t degeneracy = 1;
};

/// Number of states with angular quantum number l in D dimensions:
/// C(l+D-1, D-1) - C(l+D-3, D-1), which equals (2l+D-2)(l+D-3)!/((D-2)! l!).
inline std::int64_t l_degeneracy(int dimension, int l) {
  if (dimension < 2 || l < 0) throw DomainError("l_degeneracy: need D >= 2 and l >= 0");
  const BigInt d = binomial(l + dimension - 1, dimension - 1) - binomial(l + dimension - 3, dimension - 1);
  return d.convert_to<std::int64_t>();
}

/// Langer-corrected angular momentum hbar (l + (D-2)/2).
inline double langer_momentum(const SystemParams& params, int l) {
  return params.hbar * (l + 0.5 * (params.dimension - 2));
}

namespace detail {

/// First local maximum of V on r > 0 (a barrier), if any. Scans dV/dr on a
/// geometric grid out to 1e3 oscillator lengths.
inline std::optional<double> potential_barrier(const SystemParams& params, double length_scale) {
  bool any_negative = false;
  for (const auto& t : params.terms) any_negative = any_negative || t.epsilon < 0.0;
  if (!any_negative) return std::nullopt;
  constexpr int samples = 4000;
  const double lo = 1e-3 * length_scale, hi = 1e3 * length_scale;
  const double ratio = std::pow(hi / lo, 1.0 / samples);
  double r_prev = lo;
  double d_prev = params.potential_derivative(r_prev);
  for (int i = 1; i <= samples; ++i) {
    const double r = lo * std::pow(ratio, i);
    const double d = params.potential_derivative(r);
    if (d_prev > 0.0 && d <= 0.0) {
      return bracketed_root([&](double x) { return params.potential_derivative(x); }, r_prev, r);
    }
    r_prev = r;
    d_prev = d;
  }
  return std::nullopt;
}

/// r^2 p_r^2 = 2 (E - V(r)) r^2 - L^2.
inline double radial_u(const SystemParams& params, double energy, double angular, double r) {
  return 2.0 * (energy - params.potential(r)) * r * r - angular * angular;
}

}  // namespace detail

/// Outer turning point V(r_max) = E of the l = 0 motion.
inline TurningPoint outer_turning_point(const SystemParams& params, double energy) {
  params.validate();
  if (!(energy > 0.0)) throw DomainError("outer_turning_point: energy must be positive");
  const double r0 = params.r0(energy);
  const auto barrier = detail::potential_barrier(params, r0);
  double hi;
  if (barrier) {
    if (energy >= params.potential(*barrier)) {
      std::ostringstream msg;
      msg << "outer_turning_point: E=" << energy << " is above the barrier V=" << params.potential(*barrier)
          << " at r=" << *barrier;
      throw NoBoundStateError(msg.str());
    }
    hi = *barrier;
  } else {
    hi = r0;
    while (params.potential(hi) < energy) {
      hi *= 2.0;
      if (!std::isfinite(hi)) throw NoBoundStateError("outer_turning_point: potential does not confine");
    }
  }
  const double r = bracketed_root([&](double x) { return params.potential(x) - energy; }, 0.0, hi);
  return {r, 0.0};
}

/// Inner and outer turning points of the radial motion with angular momentum L.
inline TurningPoint turning_points(const SystemParams& params, double energy, double angular) {
  const TurningPoint outer0 = outer_turning_point(params, energy);
  if (angular == 0.0) return outer0;
  // u(r) peaks where 2E - 2V - r V' = 0.
  auto g = [&](double r) { return 2.0 * energy - 2.0 * params.potential(r) - r * params.potential_derivative(r); };
  const double r_peak = bracketed_root(g, 0.0, outer0.r_max);
  const double u_peak = detail::radial_u(params, energy, angular, r_peak);
  if (!(u_peak > 0.0)) {
    std::ostringstream msg;
    msg << "turning_points: no classically allowed region at E=" << energy << ", L=" << angular;
    throw DomainError(msg.str());
  }
  auto u = [&](double r) { return detail::radial_u(params, energy, angular, r); };
  const double inner = bracketed_root(u, 0.0, r_peak);
  const double outer = bracketed_root(u, r_peak, outer0.r_max);
  return {outer, inner};
}

namespace detail {

/// int over [r_in, r_out] of f(r) after r = mid + half sin(theta). Panels
/// are graded geometrically toward theta = -pi/2 down to `feature`, the
/// angular scale on which f varies near the inner end.
template <typename F>
double sin_mapped_integral(F&& f, double r_in, double r_out, double feature, int order) {
  const double mid = 0.5 * (r_in + r_out), half = 0.5 * (r_out - r_in);
  const double pi2 = 0.5 * std::numbers::pi;
  auto g = [&](double theta) {
    const double c = std::cos(theta);
    return f(mid + half * std::sin(theta)) * half * c;
  };
  std::vector<double> cuts{-pi2};
  if (feature < 0.25) {
    for (double t = std::max(feature, 1e-12); t < 0.5; t *= 2.0) cuts.push_back(-pi2 + t);
  }
  cuts.push_back(-pi2 + 0.5);
  cuts.push_back(0.0);
  cuts.push_back(pi2);
  const auto& rule = gauss_legendre(order);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += rule.integrate(g, cuts[i], cuts[i + 1]);
  return sum;
}

}  // namespace detail

/// S_r = 2 int sqrt(2(E - V) - L^2/r^2) dr between the turning points, with a
/// relative error estimate from order doubling below 1e-10.
inline double radial_action(const SystemParams& params, double energy, double angular) {
  const TurningPoint tp = turning_points(params, energy, angular);
  auto f = [&](double r) {
    if (r <= 0.0) return angular == 0.0 ? std::sqrt(2.0 * energy - 2.0 * params.potential(0.0)) : 0.0;
    const double p2 = 2.0 * (energy - params.potential(r)) - angular * angular / (r * r);
    return p2 > 0.0 ? std::sqrt(p2) : 0.0;
  };
  const double half = 0.5 * (tp.r_max - tp.inner);
  const double feature = tp.inner > 0.0 ? std::sqrt(2.0 * tp.inner / half) : 1.0;
  double previous = 2.0 * detail::sin_mapped_integral(f, tp.inner, tp.r_max, feature, 24);
  for (int order = 48; order <= 384; order *= 2) {
    const double current = 2.0 * detail::sin_mapped_integral(f, tp.inner, tp.r_max, feature, order);
    if (std::abs(current - previous) <= 1e-10 * std::abs(current)) return current;
    previous = current;
  }
  std::ostringstream msg;
  msg << "radial_action: quadrature did not reach 1e-10 at E=" << energy << ", L=" << angular;
  throw AccuracyError(msg.str());
}

namespace detail {

/// Bottom of the effective potential V + L^2/(2 r^2) (where S_r = 0).
inline double effective_minimum(const SystemParams& params, double angular, double length_scale) {
  if (angular == 0.0) return params.potential(0.0);
  auto dveff = [&](double r) { return params.potential_derivative(r) - angular * angular / (r * r * r); };
  double lo = 1e-6 * length_scale, hi = length_scale;
  while (dveff(lo) > 0.0) lo *= 0.5;
  while (dveff(hi) < 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NoBoundStateError("effective potential has no minimum");
  }
  const double r = bracketed_root(dveff, lo, hi);
  return params.potential(r) + angular * angular / (2.0 * r * r);
}

}  // namespace detail

/// EBK energy from S_r(E) = 2 pi hbar (n_r + 1/2) with the Langer momentum.
inline EbkLevel ebk_energy(const SystemParams& params, int n_r, int l) {
  params.validate();
  if (n_r < 0 || l < 0) throw DomainError("ebk_energy: quantum numbers must be >= 0");
  const double hw = params.hbar * params.omega;
  const double angular = langer_momentum(params, l);
  const double target = 2.0 * std::numbers::pi * params.hbar * (n_r + 0.5);
  const double e0 = hw * (2 * n_r + l + 0.5 * params.dimension);
  const double length = std::sqrt(2.0 * e0) / params.omega;

  const double e_lo = detail::effective_minimum(params, angular, length);
  double e_cap = std::numeric_limits<double>::infinity();
  if (const auto barrier = detail::potential_barrier(params, length)) e_cap = params.potential(*barrier);

  auto residual = [&](double e) {
    if (e <= e_lo) return -target;
    try {
      return radial_action(params, e, angular) - target;
    } catch (const DomainError&) {
      return -target;
    }
  };
  double e_hi = std::max(e0, e_lo + hw);
  while (e_hi < e_cap && residual(e_hi) < 0.0) {
    e_hi = e_lo + 2.0 * (e_hi - e_lo);
  }
  if (e_hi >= e_cap) {
    e_hi = e_cap * (1.0 - 1e-12);
    if (residual(e_hi) < 0.0) {
      std::ostringstream msg;
      msg << "ebk_energy: level (n_r=" << n_r << ", l=" << l << ") lies above the barrier at E=" << e_cap;
      throw NoBoundStateError(msg.str());
    }
  }
  const double e = bracketed_root(residual, e_lo, e_hi, {1e-15, 0.0, 400});
  return {n_r, l, e, l_degeneracy(params.dimension, l)};
}

/// All levels with E <= e_max; explicit cutoffs optionally restrict n_r and l.
inline std::vector<EbkLevel> ebk_levels(const SystemParams& params, double e_max, std::optional<int> n_r_max = {},
                                        std::optional<int> l_max = {}) {
  std::vector<EbkLevel> levels;
  for (int l = 0; !l_max || l <= *l_max; ++l) {
    bool any = false;
    for (int n_r = 0; !n_r_max || n_r <= *n_r_max; ++n_r) {
      EbkLevel lev;
      try {
        lev = ebk_energy(params, n_r, l);
      } catch (const NoBoundStateError&) {
        break;
      }
      if (lev.energy > e_max) break;
      levels.push_back(lev);
      any = true;
    }
    if (!any) break;
  }
  std::sort(levels.begin(), levels.end(), [](const EbkLevel& a, const EbkLevel& b) {
    return a.energy != b.energy ? a.energy < b.energy : (a.l != b.l ? a.l < b.l : a.n_r < b.n_r);
  });
  return levels;
}

// ---------------------------------------------------------------------------
// Smooth (Thomas-Fermi) density of states
// ---------------------------------------------------------------------------

/// Phase-space volume density: (2 pi hbar^2)^{-D/2} (2 pi^{D/2}/Gamma(D/2)^2)
/// int_0^{r_max} (E - V)^{D/2-1} r^{D-1} dr, with r = r_max sin(theta).
inline double tf_smooth(const SystemParams& params, double energy) {
  const TurningPoint tp = outer_turning_point(params, energy);
  const int d = params.dimension;
  const double r_max = tp.r_max;
  auto g = [&](double theta) {
    const double r = r_max * std::sin(theta);
    const double gap = std::max(0.0, energy - params.potential(r));
    const double radial = d == 2 ? 1.0 : std::pow(gap, 0.5 * d - 1.0);
    return radial * std::pow(r, d - 1) * r_max * std::cos(theta);
  };
  const double pi2 = 0.5 * std::numbers::pi;
  const double coarse = gauss_legendre(64).integrate(g, 0.0, pi2);
  const double fine = gauss_legendre(128).integrate(g, 0.0, pi2);
  if (std::abs(fine - coarse) > 1e-12 * std::abs(fine)) {
    throw AccuracyError("tf_smooth: quadrature estimate above 1e-12");
  }
  const double hbar = params.hbar;
  const double norm = std::pow(2.0 * std::numbers::pi * hbar * hbar, -0.5 * d) * 2.0 *
                      std::pow(std::numbers::pi, 0.5 * d) / std::pow(std::tgamma(0.5 * d), 2);
  return norm * fine;
}

// ---------------------------------------------------------------------------
// Gaussian-smoothed EBK density of states
// ---------------------------------------------------------------------------

struct EbkDos {
  std::vector<double> energies;
  std::vector<double> g_ebk;
  std::vector<double> g_smooth;
  std::vector<double> dg_ebk;
  std::size_t level_count = 0;
  bool truncated = false;
  double missing_weight_bound = 0.0;  // max over the grid of the omitted Gaussian weight
};

inline double gaussian_sum(const std::vector<EbkLevel>& levels, double energy, double width) {
  const double norm = 1.0 / (width * std::sqrt(std::numbers::pi));
  double g = 0.0;
  for (const auto& lev : levels) {
    const double x = (energy - lev.energy) / width;
    if (std::abs(x) > 40.0) continue;
    g += static_cast<double>(lev.degeneracy) * std::exp(-x * x);
  }
  return g * norm;
}

/// Smoothed density from a given level list (for example one read back from disk).
inline EbkDos ebk_dos_from_levels(const SystemParams& params, const std::vector<double>& energies, double width,
                                  const std::vector<EbkLevel>& levels) {
  if (!(width > 0.0)) throw DomainError("ebk_dos: width must be positive");
  EbkDos out;
  out.level_count = levels.size();
  for (double e : energies) {
    const double g = gaussian_sum(levels, e, width);
    const double s = tf_smooth(params, e);
    out.energies.push_back(e);
    out.g_ebk.push_back(g);
    out.g_smooth.push_back(s);
    out.dg_ebk.push_back(g - s);
  }
  return out;
}

/// g_EBK(E) = (1/(w sqrt pi)) sum deg(l) exp(-(E - E_{n,l})^2/w^2), and its
/// difference with tf_smooth. Levels up to 5w above the grid are included
/// unless explicit cutoffs exclude them, which is reported.
inline EbkDos ebk_dos(const SystemParams& params, const std::vector<double>& energies, double width,
                      std::optional<int> n_r_max = {}, std::optional<int> l_max = {}) {
  if (!(width > 0.0)) throw DomainError("ebk_dos: width must be positive");
  if (energies.empty()) throw DomainError("ebk_dos: empty energy grid");
  const double reach = energies.back() + 5.0 * width;
  const auto levels = ebk_levels(params, reach, n_r_max, l_max);
  EbkDos out = ebk_dos_from_levels(params, energies, width, levels);
  if (n_r_max || l_max) {
    const auto all = ebk_levels(params, reach);
    std::vector<EbkLevel> missing;
    for (const auto& lev : all) {
      if ((n_r_max && lev.n_r > *n_r_max) || (l_max && lev.l > *l_max)) missing.push_back(lev);
    }
    out.truncated = !missing.empty();
    for (double e : energies) out.missing_weight_bound = std::max(out.missing_weight_bound, gaussian_sum(missing, e, width));
  }
  return out;
}

}  // namespace hotrace
