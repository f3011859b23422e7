#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hotrace/action_polynomial.hpp"
#include "hotrace/errors.hpp"
#include "hotrace/modulation_factor.hpp"
#include "hotrace/special_functions.hpp"
#include "hotrace/system_params.hpp"

namespace hotrace {

// ---------------------------------------------------------------------------
// Unperturbed spectrum
// ---------------------------------------------------------------------------

struct HoLevel {
  int n = 0;
  double energy = 0.0;
  std::int64_t degeneracy = 1;
};

inline std::int64_t ho_degeneracy(int dimension, int n) {
  if (dimension < 1 || n < 0) throw DomainError("ho_degeneracy: need D >= 1 and n >= 0");
  const BigInt d = binomial(n + dimension - 1, dimension - 1);
  if (d > std::numeric_limits<std::int64_t>::max()) throw DomainError("ho_degeneracy: overflow");
  return d.convert_to<std::int64_t>();
}

inline std::vector<HoLevel> ho_spectrum(int dimension, double omega, double hbar, int n_max) {
  if (n_max < 0) throw DomainError("ho_spectrum: n_max must be >= 0");
  if (dimension < 1) throw DomainError("ho_spectrum: dimension must be >= 1");
  std::vector<HoLevel> levels;
  levels.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    levels.push_back({n, hbar * omega * (n + 0.5 * dimension), ho_degeneracy(dimension, n)});
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Perturbative trace formula
// ---------------------------------------------------------------------------

/// Amplitude of the k = 0 (Thomas-Fermi) term. `leading` keeps E^{D-1} only;
/// `extended` uses the full product prod_{j=1}^{D-1} (E/hw - D/2 + j), which
/// makes the unperturbed sum reproduce the delta-comb spectrum exactly.
enum class Prefactor { leading, extended };

struct TraceOptions {
  ModulationMethod method = ModulationMethod::quadrature;
  ClosedFormVariant variant = ClosedFormVariant::hypergeometric;
  Prefactor prefactor = Prefactor::leading;
  int quadrature_order = 200;
};

struct DosPoint {
  double energy = 0.0;
  double smooth = 0.0;
  double oscillating = 0.0;
  double envelope = 0.0;  // 2 * prefactor * |sum_{k>=1} ...|, the analytic-signal modulus
};

struct DosCurve {
  std::vector<double> energies;
  std::vector<double> smooth;
  std::vector<double> oscillating;
  std::vector<double> envelope;
  int k_max = 0;
  double width = 0.0;

  std::size_t size() const { return energies.size(); }
  std::vector<double> total() const {
    std::vector<double> t(smooth.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = smooth[i] + oscillating[i];
    return t;
  }
};

inline double tf_prefactor(int dimension, double energy, double omega, double hbar, Prefactor kind) {
  const double hw = hbar * omega;
  const double e = energy / hw;
  double num = 1.0;
  for (int j = 1; j < dimension; ++j) {
    num *= (kind == Prefactor::leading) ? e : e - 0.5 * dimension + j;
    num /= j;
  }
  return num / hw;
}

inline double gaussian_damping(double width, int k, double omega, double hbar) {
  const double period = 2.0 * std::numbers::pi / omega;
  const double arg = width * k * period / (2.0 * hbar);
  return std::exp(-arg * arg);
}

namespace detail {

inline Complex modulation_value(const ActionPolynomial& poly, int dimension, int k, double sigma_over_hbar,
                                const TraceOptions& opt) {
  switch (opt.method) {
    case ModulationMethod::quadrature:
      return modulation_quadrature(poly, sigma_over_hbar, dimension, k, opt.quadrature_order).value;
    case ModulationMethod::closed_form:
      return modulation_closed_form(poly, sigma_over_hbar, dimension, k, opt.variant).value;
    case ModulationMethod::spa:
      return modulation_spa(poly, sigma_over_hbar, dimension, k).value;
  }
  return 1.0;
}

}  // namespace detail

/// delta g at energy E: prefactor * 2 Re sum_{k=1}^{k_max} (-1)^{Dk} e^{-(w k T0/2 hbar)^2} M_k e^{i k S0/hbar}.
/// Harmonic (alpha = 1) terms renormalize omega; higher terms enter M_k.
/// An unperturbed system has M_k = 1 for every method.
inline DosPoint g_pert(const SystemParams& params, double energy, int k_max, double width,
                       const TraceOptions& opt = {}) {
  params.validate();
  if (!(energy > 0.0)) throw DomainError("g_pert: energy must be positive");
  if (k_max < 1) throw DomainError("g_pert: k_max must be >= 1");
  if (!(width >= 0.0)) throw DomainError("g_pert: width must be non-negative");
  const PolynomialAction action = polynomial_delta_s(params, energy);
  const double omega = action.omega_eff;
  const bool trivial = std::all_of(action.coeffs.begin(), action.coeffs.end(), [](double c) { return c == 0.0; });
  if (!trivial && opt.method == ModulationMethod::closed_form && action.max_alpha > 3) {
    throw UnsupportedError("g_pert: closed form needs alpha in {2, 3}; use quadrature");
  }
  const ActionPolynomial poly = action.as_polynomial();
  const double s_over_hbar = 1.0 / params.hbar;
  const double phase0 = 2.0 * std::numbers::pi * energy / (omega * params.hbar);

  Complex sum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const Complex m = trivial ? Complex(1.0) : detail::modulation_value(poly, params.dimension, k, s_over_hbar, opt);
    const double sign = ((params.dimension * k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * gaussian_damping(width, k, omega, params.hbar) * m * std::polar(1.0, k * phase0);
  }
  const double pref = tf_prefactor(params.dimension, energy, omega, params.hbar, opt.prefactor);
  DosPoint out;
  out.energy = energy;
  out.smooth = pref;
  out.oscillating = 2.0 * pref * sum.real();
  out.envelope = 2.0 * pref * std::abs(sum);
  return out;
}

inline DosCurve dos_curve(const SystemParams& params, const std::vector<double>& energies, int k_max, double width,
                          const TraceOptions& opt = {}) {
  DosCurve curve;
  curve.k_max = k_max;
  curve.width = width;
  curve.energies.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (i > 0 && !(energies[i] > energies[i - 1])) throw DomainError("dos_curve: energies must increase strictly");
    const DosPoint p = g_pert(params, energies[i], k_max, width, opt);
    curve.energies.push_back(p.energy);
    curve.smooth.push_back(p.smooth);
    curve.oscillating.push_back(p.oscillating);
    curve.envelope.push_back(p.envelope);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Super-shell structure (D = 3, alpha = 2, 3)
// ---------------------------------------------------------------------------

namespace detail {
inline const PerturbationTerm& supershell_term(const SystemParams& params) {
  params.validate();
  if (params.dimension != 3 || params.terms.size() != 1 ||
      (params.terms.front().alpha != 2 && params.terms.front().alpha != 3)) {
    throw UnsupportedError("super-shell forms need D=3 and a single alpha in {2, 3}");
  }
  return params.terms.front();
}
}  // namespace detail

/// Factorized form: (omega^{2(alpha-1)} E^{2-alpha} / (pi eps a1 hbar^2))
///   sum_k ((-1)^k / k) cos(k [S0 - sigma (a0 + a1/2)]/hbar) sin(k sigma a1/(2 hbar)) damp_k.
inline double supershell_factorized(const SystemParams& params, double energy, int k_max, double width) {
  const auto& term = detail::supershell_term(params);
  if (!(energy > 0.0)) throw DomainError("supershell_factorized: energy must be positive");
  if (k_max < 1) throw DomainError("supershell_factorized: k_max must be >= 1");
  if (term.epsilon == 0.0) throw DomainError("supershell_factorized: epsilon must be nonzero");
  const double omega = params.omega, hbar = params.hbar;
  const int alpha = term.alpha;
  const auto poly = action_polynomial(alpha);
  const double a0 = poly.coeffs[0], a1 = poly.coeffs[1];
  const double sigma = sigma_alpha(energy, term.epsilon, alpha, omega).sigma;
  const double s0 = 2.0 * std::numbers::pi * energy / omega;
  const double phase = (s0 - sigma * (a0 + 0.5 * a1)) / hbar;
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign / k * std::cos(k * phase) * std::sin(k * sigma * a1 / (2.0 * hbar)) *
           gaussian_damping(width, k, omega, hbar);
  }
  const double pref = std::pow(omega, 2 * (alpha - 1)) * std::pow(energy, 2 - alpha) /
                      (std::numbers::pi * term.epsilon * a1 * hbar * hbar);
  return pref * sum;
}

/// Super-shell node energies in units of hbar*omega, s = 1..s_max.
inline std::vector<double> supershell_nodes(const SystemParams& params, int s_max) {
  const auto& term = detail::supershell_term(params);
  if (term.epsilon == 0.0) throw DomainError("supershell_nodes: epsilon must be nonzero");
  if (s_max < 1) throw DomainError("supershell_nodes: s_max must be >= 1");
  const double w = params.omega, h = params.hbar, e = std::abs(term.epsilon);
  std::vector<double> nodes;
  for (int s = 1; s <= s_max; ++s) {
    nodes.push_back(term.alpha == 2 ? std::sqrt(2.0 * s * w * w * w / (e * h))
                                    : std::cbrt(2.0 * s * std::pow(w, 4) / (3.0 * e * h * h)));
  }
  return nodes;
}

// ---------------------------------------------------------------------------
// Envelope analysis
// ---------------------------------------------------------------------------

/// Sliding maximum of |values| over [E - half_window, E + half_window].
inline std::vector<double> running_max_envelope(const std::vector<double>& energies, const std::vector<double>& values,
                                                double half_window) {
  if (energies.size() != values.size()) throw DomainError("running_max_envelope: size mismatch");
  std::vector<double> env(values.size(), 0.0);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    while (energies[lo] < energies[i] - half_window) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < values.size() && energies[hi + 1] <= energies[i] + half_window) ++hi;
    double m = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) m = std::max(m, std::abs(values[j]));
    env[i] = m;
  }
  return env;
}

/// Local minima of an envelope: points that are the minimum within
/// +-radius and lie below depth * (maximum within +-radius). Adjacent ties
/// collapse to their midpoint.
inline std::vector<double> envelope_nodes(const std::vector<double>& energies, const std::vector<double>& envelope,
                                          double radius, double depth = 0.5) {
  if (energies.size() != envelope.size()) throw DomainError("envelope_nodes: size mismatch");
  std::vector<double> nodes;
  const std::size_t n = energies.size();
  std::size_t lo = 0, hi = 0;
  std::size_t run_start = n;
  for (std::size_t i = 0; i < n; ++i) {
    while (energies[lo] < energies[i] - radius) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < n && energies[hi + 1] <= energies[i] + radius) ++hi;
    // skip points whose window is cut off by the grid ends
    const bool interior = energies[i] - radius >= energies.front() && energies[i] + radius <= energies.back();
    double mn = envelope[i], mx = envelope[i];
    for (std::size_t j = lo; j <= hi; ++j) {
      mn = std::min(mn, envelope[j]);
      mx = std::max(mx, envelope[j]);
    }
    const bool is_node = interior && envelope[i] <= mn && envelope[i] < depth * mx;
    if (is_node) {
      if (run_start == n) run_start = i;
    }
    if (run_start != n && (!is_node || i + 1 == n)) {
      const std::size_t run_end = is_node ? i : i - 1;
      nodes.push_back(0.5 * (energies[run_start] + energies[run_end]));
      run_start = n;
    }
  }
  return nodes;
}

inline double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("pearson_correlation: need equal sizes >= 2");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw DomainError("pearson_correlation: constant series");
  return sab / std::sqrt(saa * sbb);
}

/// n evenly spaced points from a to b inclusive.
inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw DomainError("linspace: need n >= 1");
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  const double step = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (i + 1 == n) ? b : a + step * i;
  return v;
}

}  // namespace hotrace
