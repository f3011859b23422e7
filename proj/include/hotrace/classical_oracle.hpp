#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "hotrace/errors.hpp"
#include "hotrace/system_params.hpp"

namespace hotrace {

struct PhaseState {
  std::vector<double> q;
  std::vector<double> p;
  double t = 0.0;
};

inline double hamiltonian(const SystemParams& params, const PhaseState& s) {
  double p2 = 0.0, q2 = 0.0;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    p2 += s.p[i] * s.p[i];
    q2 += s.q[i] * s.q[i];
  }
  return 0.5 * p2 + params.potential(std::sqrt(q2));
}

namespace detail {

/// -grad V = -(omega^2 + sum 2 alpha eps |q|^{2 alpha - 2}) q
inline void apply_kick(const SystemParams& params, PhaseState& s, double h) {
  double q2 = 0.0;
  for (double x : s.q) q2 += x * x;
  double coeff = params.omega * params.omega;
  for (const auto& t : params.terms) coeff += 2.0 * t.alpha * t.epsilon * std::pow(q2, t.alpha - 1);
  for (std::size_t i = 0; i < s.q.size(); ++i) s.p[i] -= h * coeff * s.q[i];
}

inline void apply_drift(PhaseState& s, double h) {
  for (std::size_t i = 0; i < s.q.size(); ++i) s.q[i] += h * s.p[i];
}

/// One step of the fourth-order (Forest-Ruth/Yoshida) composition of
/// kick-drift-kick leapfrog.
inline void symplectic_step(const SystemParams& params, PhaseState& s, double dt) {
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 / (2.0 - cbrt2);
  for (double w : {w1, w0, w1}) {
    const double h = w * dt;
    apply_kick(params, s, 0.5 * h);
    apply_drift(s, h);
    apply_kick(params, s, 0.5 * h);
  }
  s.t += dt;
}

}  // namespace detail

/// Integrates Hamilton's equations from `initial` to t_end with fixed step
/// dt (shortened on the last step). Every `stride`-th state is recorded,
/// along with the final one.
inline std::vector<PhaseState> integrate_orbit(const SystemParams& params, const PhaseState& initial, double t_end,
                                               double dt, int stride = 1) {
  params.validate();
  if (!(dt > 0.0)) throw DomainError("integrate_orbit: dt must be positive");
  if (stride < 1) throw DomainError("integrate_orbit: stride must be >= 1");
  if (initial.q.size() != static_cast<std::size_t>(params.dimension) || initial.p.size() != initial.q.size()) {
    throw DomainError("integrate_orbit: state dimension does not match D");
  }
  const double e0 = hamiltonian(params, initial);
  const double scale = std::max(std::abs(e0), 1e-300);
  std::vector<PhaseState> out{initial};
  PhaseState s = initial;
  const auto steps = static_cast<long>(std::ceil((t_end - initial.t) / dt - 1e-9));
  for (long n = 0; n < steps; ++n) {
    const double h = std::min(dt, t_end - s.t);
    detail::symplectic_step(params, s, h);
    const double e = hamiltonian(params, s);
    if (!std::isfinite(e) || std::abs(e - e0) > 1e-3 * scale) {
      std::ostringstream msg;
      msg << "integrate_orbit: unstable at t=" << s.t << " (energy " << e0 << " -> " << e << "); reduce dt=" << dt;
      throw StepSizeError(msg.str());
    }
    if ((n + 1) % stride == 0 || n + 1 == steps) out.push_back(s);
  }
  return out;
}

struct AngularMomentum {
  std::vector<double> components;  // pairs (j, k), j < k, row-major
  double magnitude = 0.0;
};

/// L_jk = p_j q_k - p_k q_j for all j < k.
inline AngularMomentum angular_momentum(const PhaseState& s) {
  AngularMomentum out;
  const std::size_t d = s.q.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      const double c = s.p[j] * s.q[k] - s.p[k] * s.q[j];
      out.components.push_back(c);
      sum += c * c;
    }
  }
  out.magnitude = std::sqrt(sum);
  return out;
}

/// Unperturbed orbit q(t) = (a cos wt, b sin wt) in its principal plane.
struct EllipseOrbit {
  double a = 1.0;
  double b = 0.0;
  double omega = 1.0;

  double r0_squared() const { return a * a + b * b; }
  double angular_momentum() const { return omega * a * b; }
  double ltilde() const {
    const double r2 = r0_squared();
    return r2 > 0.0 ? 2.0 * a * b / r2 : 0.0;
  }
  double energy() const { return 0.5 * omega * omega * r0_squared(); }
};

inline EllipseOrbit make_ellipse(double a, double b, double omega) {
  if (b > a) std::swap(a, b);
  if (b < 0.0 || !(omega > 0.0)) throw DomainError("make_ellipse: need a >= b >= 0 and omega > 0");
  return {a, b, omega};
}

/// Ellipse with energy E and scaled angular momentum l.
inline EllipseOrbit ellipse_from_energy(double energy, double ltilde, double omega) {
  if (!(energy > 0.0) || ltilde < 0.0 || ltilde > 1.0 || !(omega > 0.0)) {
    throw DomainError("ellipse_from_energy: need E > 0, l in [0, 1], omega > 0");
  }
  const double r0 = std::sqrt(2.0 * energy) / omega;
  const double up = std::sqrt(1.0 + ltilde), down = std::sqrt(1.0 - ltilde);
  return {0.5 * r0 * (up + down), 0.5 * r0 * (up - down), omega};
}

/// -eps int_0^{2 pi/omega} (a^2 cos^2 wt + b^2 sin^2 wt)^alpha dt by the
/// periodic trapezoid rule, exact for n_quad > 2 alpha.
inline double delta_s_oracle(const EllipseOrbit& orbit, double epsilon, int alpha, int n_quad = 256) {
  if (n_quad < 64) throw DomainError("delta_s_oracle: n_quad must be >= 64");
  if (alpha < 1) throw DomainError("delta_s_oracle: alpha must be >= 1");
  const double a2 = orbit.a * orbit.a, b2 = orbit.b * orbit.b;
  long double sum = 0.0L;
  for (int i = 0; i < n_quad; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n_quad;
    const double c = std::cos(phi), s = std::sin(phi);
    sum += std::pow(static_cast<long double>(a2 * c * c + b2 * s * s), alpha);
  }
  const double period = 2.0 * std::numbers::pi / orbit.omega;
  return -epsilon * period * static_cast<double>(sum / n_quad);
}

struct DiameterAction {
  double s0 = 0.0;
  double delta_s = 0.0;
};

/// S ~ 2 pi E/omega - eps 2^{alpha+1} sqrt(pi) Gamma(alpha + 1/2) E^alpha / (Gamma(alpha + 1) omega^{2 alpha + 1}).
inline DiameterAction diameter_action_expansion(const SystemParams& params, double energy) {
  const auto& term = params.monomial();
  if (!(energy > 0.0)) throw DomainError("diameter_action_expansion: energy must be positive");
  const int alpha = term.alpha;
  const double w = params.omega;
  const double log_mag = (alpha + 1) * std::log(2.0) + 0.5 * std::log(std::numbers::pi) + std::lgamma(alpha + 0.5) -
                         std::lgamma(alpha + 1.0) + alpha * std::log(energy) - (2 * alpha + 1) * std::log(w);
  return {2.0 * std::numbers::pi * energy / w, -term.epsilon * std::exp(log_mag)};
}

}  // namespace hotrace
