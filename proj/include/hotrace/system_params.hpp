#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "hotrace/errors.hpp"

namespace hotrace {

/// One radial monomial epsilon * |q|^{2 alpha}.
struct PerturbationTerm {
  double epsilon = 0.0;
  int alpha = 2;

  friend bool operator==(const PerturbationTerm&, const PerturbationTerm&) = default;
};

/// Isotropic D-dimensional oscillator with unit mass and radial polynomial
/// perturbation H = p^2/2 + omega^2 q^2/2 + sum_j epsilon_j |q|^{2 alpha_j}.
struct SystemParams {
  int dimension = 3;
  double omega = 1.0;
  double hbar = 1.0;
  std::vector<PerturbationTerm> terms;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;

  void validate() const {
    std::ostringstream msg;
    if (dimension < 2) msg << "dimension must be >= 2 (got " << dimension << ")";
    else if (!(omega > 0.0)) msg << "omega must be positive (got " << omega << ")";
    else if (!(hbar > 0.0)) msg << "hbar must be positive (got " << hbar << ")";
    else {
      for (const auto& t : terms) {
        if (t.alpha < 1) {
          msg << "perturbation order alpha must be >= 1 (got " << t.alpha << ")";
          break;
        }
        if (!std::isfinite(t.epsilon)) {
          msg << "perturbation strength must be finite";
          break;
        }
      }
    }
    if (!msg.str().empty()) throw DomainError("SystemParams: " + msg.str());
  }

  /// Oscillator length sqrt(2E)/omega.
  double r0(double energy) const { return std::sqrt(2.0 * energy) / omega; }

  /// Potential V(r) = omega^2 r^2 / 2 + sum epsilon r^{2 alpha}.
  double potential(double r) const {
    const double r2 = r * r;
    double v = 0.5 * omega * omega * r2;
    for (const auto& t : terms) v += t.epsilon * std::pow(r2, t.alpha);
    return v;
  }

  /// dV/dr.
  double potential_derivative(double r) const {
    double dv = omega * omega * r;
    for (const auto& t : terms) dv += 2.0 * t.alpha * t.epsilon * std::pow(r, 2 * t.alpha - 1);
    return dv;
  }

  bool unperturbed() const {
    for (const auto& t : terms) {
      if (t.epsilon != 0.0) return false;
    }
    return true;
  }

  /// The single monomial term; throws unless exactly one term is present.
  const PerturbationTerm& monomial() const {
    if (terms.size() != 1) {
      throw DomainError("SystemParams: expected exactly one perturbation term");
    }
    return terms.front();
  }
};

inline SystemParams monomial_system(int dimension, double epsilon, int alpha, double omega = 1.0,
                                    double hbar = 1.0) {
  SystemParams p{dimension, omega, hbar, {{epsilon, alpha}}};
  p.validate();
  return p;
}

/// Mean-field Thomas-Fermi perturbation of a D=3 trapped Fermi gas, truncated
/// after the r^6 term: a harmonic shift 3 U0 rho0 / (2 R^2), then
/// 6 U0 rho0 / (16 R^4) r^4 and U0 rho0 / (16 R^6) r^6.
inline SystemParams mean_field_system(double u0_rho0, double r_tf, double omega = 1.0,
                                      double hbar = 1.0) {
  const double r2 = r_tf * r_tf;
  SystemParams p{3, omega, hbar,
                 {{1.5 * u0_rho0 / r2, 1},
                  {6.0 * u0_rho0 / (16.0 * r2 * r2), 2},
                  {u0_rho0 / (16.0 * r2 * r2 * r2), 3}}};
  p.validate();
  return p;
}

}  // namespace hotrace
