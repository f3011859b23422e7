#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hotrace/action_polynomial.hpp"
#include "hotrace/ebk_reference.hpp"
#include "hotrace/trace_formula.hpp"
#include "support.hpp"

using namespace hotrace;
using hotrace::test::rel_err;

namespace {

// index-th eigenvalue (from 0) of the finite-difference radial Hamiltonian
// -u''/2 + [l(l+1)/(2r^2) + V(r)] u on (0, r_end), u = 0 at both ends, by
// Sturm-sequence bisection. Second order in the step.
double radial_eigenvalue(const SystemParams& p, int l, int index, int n, double r_end) {
  const double h = r_end / (n + 1);
  const double off = -0.5 / (h * h);
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = h * (i + 1);
    diag[static_cast<std::size_t>(i)] = 1.0 / (h * h) + l * (l + 1) / (2.0 * r * r) + p.potential(r);
  }
  auto below = [&](double x) {
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
      q = diag[static_cast<std::size_t>(i)] - x - (i > 0 ? off * off / q : 0.0);
      if (q == 0.0) q = 1e-300;
      if (q < 0.0) ++count;
    }
    return count;
  };
  double lo = 0.0, hi = 4.0 / (h * h) + diag.back();
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) > index ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(LDegeneracy, ClosedFormAndIdentity) {
  for (int l = 0; l <= 40; ++l) EXPECT_EQ(l_degeneracy(3, l), 2 * l + 1);
  for (int l = 0; l <= 40; ++l) EXPECT_EQ(l_degeneracy(2, l), l == 0 ? 1 : 2);
  // (2l+D-2)(l+D-3)!/((D-2)! l!)
  for (int d = 3; d <= 7; ++d) {
    for (int l = 0; l <= 20; ++l) {
      const BigInt want = BigInt(2 * l + d - 2) * factorial(l + d - 3) / (factorial(d - 2) * factorial(l));
      EXPECT_EQ(BigInt(l_degeneracy(d, l)), want) << d << " " << l;
    }
  }
  for (int d = 2; d <= 5; ++d) {
    for (int n = 0; n <= 30; ++n) {
      std::int64_t sum = 0;
      for (int l = n % 2; l <= n; l += 2) sum += l_degeneracy(d, l);
      EXPECT_EQ(sum, ho_degeneracy(d, n)) << d << " " << n;
    }
  }
  EXPECT_THROW(l_degeneracy(1, 0), DomainError);
}

TEST(TurningPoints, HarmonicAndQuadraticOracle) {
  const auto free = monomial_system(3, 0.0, 2);
  EXPECT_NEAR(outer_turning_point(free, 2.0).r_max, 2.0, 1e-13);

  const auto p = monomial_system(3, 0.1, 2);
  const double r2 = (-0.5 + std::sqrt(0.25 + 0.4)) / 0.2;
  const auto tp = outer_turning_point(p, 1.0);
  EXPECT_NEAR(tp.r_max, std::sqrt(r2), 1e-13);
  EXPECT_LE(std::abs(p.potential(tp.r_max) - 1.0), 1e-12);
  EXPECT_LT(tp.r_max, p.r0(1.0));
}

TEST(TurningPoints, EnergyConservationAndSignPattern) {
  for (int alpha : {2, 3, 5}) {
    for (double eps : {1e-3, -1e-6, 0.2}) {
      const auto p = monomial_system(3, eps, alpha);
      for (double e : {0.5, 3.0}) {
        const auto out = outer_turning_point(p, e);
        EXPECT_LE(std::abs(p.potential(out.r_max) - e), 1e-12 * e);
        // largest angular momentum still admitting an allowed region: max_r r^2 (2E - 2V)
        double l_max2 = 0.0;
        for (int i = 1; i <= 4000; ++i) {
          const double r = out.r_max * i / 4000.0;
          l_max2 = std::max(l_max2, r * r * (2.0 * e - 2.0 * p.potential(r)));
        }
        for (double angular : {0.3 * std::sqrt(l_max2), 0.8 * std::sqrt(l_max2)}) {
          const auto tp = turning_points(p, e, angular);
          auto u = [&](double r) { return 2.0 * e - 2.0 * p.potential(r) - angular * angular / (r * r); };
          const double mid = 0.5 * (tp.inner + tp.r_max);
          EXPECT_GT(u(mid), 0.0);
          EXPECT_LT(u(0.9 * tp.inner), 0.0);
          EXPECT_LT(u(1.1 * tp.r_max), 0.0);
          EXPECT_LE(std::abs(u(tp.inner)), 1e-10 * 2.0 * e);
          EXPECT_LE(std::abs(u(tp.r_max)), 1e-10 * 2.0 * e);
        }
      }
    }
  }
}

TEST(TurningPoints, BarrierRejectsUnboundEnergies) {
  const auto p = monomial_system(3, -0.01, 2);  // barrier height 1/(16 * 0.01)
  EXPECT_NO_THROW(outer_turning_point(p, 6.0));
  EXPECT_THROW(outer_turning_point(p, 7.0), NoBoundStateError);
  EXPECT_THROW(outer_turning_point(p, 0.0), DomainError);
}

TEST(RadialAction, HarmonicClosedForm) {
  for (int d : {2, 3, 4}) {
    const auto p = monomial_system(d, 0.0, 2, 1.7);
    for (double e : {0.8, 5.0, 31.0}) {
      EXPECT_NEAR(radial_action(p, e, 0.0), std::numbers::pi * e / 1.7, 1e-10 * e);
      for (double frac : {0.01, 0.3, 0.9}) {
        const double angular = frac * e / 1.7;
        EXPECT_LT(rel_err(radial_action(p, e, angular), std::numbers::pi * (e / 1.7 - angular)), 1e-10) << e << " " << frac;
      }
    }
  }
}

TEST(RadialAction, MatchesIndependentQuadrature) {
  const auto p = monomial_system(3, 0.05, 3);
  const double e = 4.0, angular = 1.1;
  const auto tp = turning_points(p, e, angular);
  // substitute r = mid + half sin(t) and let the adaptive rule handle the rest
  const double mid = 0.5 * (tp.r_max + tp.inner), half = 0.5 * (tp.r_max - tp.inner);
  const double want = 2.0 * test::gk_real(
                                 [&](double t) {
                                   const double r = mid + half * std::sin(t);
                                   const double u = 2.0 * e - 2.0 * p.potential(r) - angular * angular / (r * r);
                                   return std::sqrt(std::max(u, 0.0)) * half * std::cos(t);
                                 },
                                 -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, 16);
  EXPECT_LT(rel_err(radial_action(p, e, angular), want), 1e-10);
}

TEST(RadialAction, FirstOrderShiftIsHalfTheOrbitShift) {
  // one radial libration is half of the closed 2D orbit; eps E^{alpha-1} sets
  // the size of the second-order remainder
  for (int alpha : {2, 3, 4}) {
    const double e = 6.0;
    const double kappa = 1e-5 / std::pow(e, alpha - 1);
    const auto poly = action_polynomial(alpha);
    for (double lt : {0.1, 0.5, 0.9}) {
      const double angular = lt * e;
      std::vector<double> dev;
      for (double eps : {kappa, 0.5 * kappa}) {
        const auto p = monomial_system(3, eps, alpha);
        const double shift = radial_action(p, e, angular) - radial_action(monomial_system(3, 0.0, alpha), e, angular);
        const double half = 0.5 * delta_s(poly, sigma_alpha(e, eps, alpha, 1.0), lt);
        EXPECT_LT(rel_err(shift, half), 1e-3) << alpha << " " << lt;
        dev.push_back(std::abs(shift - half));
      }
      // the residual is second order in eps
      EXPECT_NEAR(dev[0] / dev[1], 4.0, 0.5) << alpha << " " << lt;
    }
  }
}

TEST(EbkEnergy, ExactForHarmonicOscillator) {
  for (int d : {2, 3, 4}) {
    const auto p = monomial_system(d, 0.0, 2);
    for (int n = 0; n <= 20; ++n) {
      for (int l = n % 2; l <= n; l += 2) {
        const int n_r = (n - l) / 2;
        const auto lev = ebk_energy(p, n_r, l);
        EXPECT_LT(rel_err(lev.energy, 2 * n_r + l + 0.5 * d), 1e-9) << d << " " << n_r << " " << l;
      }
    }
  }
}

TEST(EbkEnergy, MatchesFiniteDifferenceSpectrum) {
  // the perturbed spectrum from a Richardson-extrapolated radial eigensolver;
  // the semiclassical error is O(hbar^2) and stays far below the smoothing width
  const auto p = monomial_system(3, 1.25e-3, 2);
  for (int l : {0, 5, 20}) {
    for (int n_r : {0, 6, 12}) {
      const double coarse = radial_eigenvalue(p, l, n_r, 2000, 11.0);
      const double fine = radial_eigenvalue(p, l, n_r, 4001, 11.0);
      const double exact = (4.0 * fine - coarse) / 3.0;
      EXPECT_NEAR(ebk_energy(p, n_r, l).energy, exact, 1e-3) << l << " " << n_r;
    }
  }
}

TEST(EbkEnergy, GroundStateShift) {
  const double eps = 1.25e-3;
  const auto lev = ebk_energy(monomial_system(3, eps, 2), 0, 0);
  // torus average: dE = eps E^2 (3/2 - l^2/2), l = L/E with L = 1/2
  const double l = 0.5 / 1.5;
  const double first_order = eps * 2.25 * (1.5 - 0.5 * l * l);
  EXPECT_GT(lev.energy, 1.5);
  EXPECT_NEAR(lev.energy - 1.5, first_order, 0.02 * first_order);
  // the quantum expectation eps <r^4> = 15 eps / 4 sets the same scale
  EXPECT_NEAR(lev.energy - 1.5, 15.0 * eps / 4.0, 0.25 * 15.0 * eps / 4.0);
}

TEST(EbkEnergy, Monotonicity) {
  const auto p = monomial_system(3, 1.25e-3, 2);
  for (int l = 0; l <= 6; ++l) {
    for (int n_r = 0; n_r <= 6; ++n_r) {
      const double e = ebk_energy(p, n_r, l).energy;
      EXPECT_LT(e, ebk_energy(p, n_r + 1, l).energy);
      EXPECT_LT(e, ebk_energy(p, n_r, l + 1).energy);
    }
  }
}

TEST(EbkEnergy, BarrierCapsLevels) {
  const auto p = monomial_system(3, -0.01, 2);
  const auto levels = ebk_levels(p, 100.0);
  ASSERT_FALSE(levels.empty());
  for (const auto& lev : levels) EXPECT_LT(lev.energy, 6.25);
  EXPECT_THROW(ebk_energy(p, 10, 0), NoBoundStateError);
  EXPECT_THROW(ebk_energy(p, -1, 0), DomainError);
}

TEST(EbkLevels, SortedAndCutoffs) {
  const auto p = monomial_system(3, 1e-3, 2);
  const auto levels = ebk_levels(p, 12.0);
  for (std::size_t i = 1; i < levels.size(); ++i) EXPECT_LE(levels[i - 1].energy, levels[i].energy);
  for (const auto& lev : levels) EXPECT_LE(lev.energy, 12.0);
  const auto cut = ebk_levels(p, 12.0, 2, 3);
  for (const auto& lev : cut) EXPECT_TRUE(lev.n_r <= 2 && lev.l <= 3);
  EXPECT_LT(cut.size(), levels.size());
}

TEST(TfSmooth, HarmonicClosedForm) {
  for (int d = 2; d <= 5; ++d) {
    const auto p = monomial_system(d, 0.0, 2, 1.3, 0.8);
    for (double e : {0.5, 7.0, 40.0}) {
      EXPECT_LT(rel_err(tf_smooth(p, e), tf_prefactor(d, e, 1.3, 0.8, Prefactor::leading)), 1e-10) << d << " " << e;
    }
  }
  EXPECT_NEAR(tf_smooth(monomial_system(2, 0.0, 2), 3.0), 3.0, 1e-12);
}

TEST(TfSmooth, RiemannSumOracle) {
  const auto p = monomial_system(3, 0.01, 2);
  const double e = 10.0;
  const double r_max = outer_turning_point(p, e).r_max;
  constexpr long n = 1'000'000;
  const double h = r_max / n;
  long double sum = 0.0L;
  for (long i = 0; i < n; ++i) {
    const double r = (i + 0.5) * h;
    sum += std::sqrt(std::max(0.0, e - p.potential(r))) * r * r;
  }
  // phase-space prefactor (2 pi)^{-3/2} 2 pi^{3/2} / Gamma(3/2)^2
  const double c = std::pow(2.0 * std::numbers::pi, -1.5) * 2.0 * std::pow(std::numbers::pi, 1.5) /
                   std::pow(std::tgamma(1.5), 2);
  EXPECT_LT(rel_err(tf_smooth(p, e), c * static_cast<double>(sum) * h), 1e-8);
}

TEST(TfSmooth, PositiveAndIncreasing) {
  const auto p = monomial_system(3, 1.25e-3, 2);
  double prev = 0.0;
  for (double e = 0.5; e < 60.0; e += 0.5) {
    const double g = tf_smooth(p, e);
    EXPECT_GT(g, prev);
    prev = g;
  }
  EXPECT_THROW(tf_smooth(p, -1.0), DomainError);
}

TEST(EbkDos, HarmonicPeakWeights) {
  const auto p = monomial_system(3, 0.0, 2);
  const double w = 0.1;
  const auto levels = ebk_levels(p, 12.0);
  const auto& rule = gauss_legendre(32);
  for (int n = 0; n <= 8; ++n) {
    const double c = n + 1.5;
    const double weight = rule.integrate_panels([&](double e) { return gaussian_sum(levels, e, w); }, c - 0.5, c + 0.5, 8);
    EXPECT_NEAR(weight, (n + 1) * (n + 2) / 2.0, 1e-9 * (n + 1) * (n + 2));
  }
}

TEST(EbkDos, IntegratedWeightCountsStates) {
  const auto p = monomial_system(3, 1e-4, 2);
  const auto grid = linspace(0.2, 15.0, 1481);
  const auto dos = ebk_dos(p, grid, 0.1);
  const auto levels = ebk_levels(p, 15.0);
  double count = 0.0;
  for (const auto& lev : levels) {
    if (lev.energy < 14.0) count += static_cast<double>(lev.degeneracy);
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] > 14.0 + 1e-9) break;
    integral += 0.5 * (dos.g_ebk[i] + dos.g_ebk[i - 1]) * (grid[i] - grid[i - 1]);
  }
  // the cut falls between shells, where the Gaussians have died off
  EXPECT_NEAR(integral, count, 1e-6 * count);
  EXPECT_FALSE(dos.truncated);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_DOUBLE_EQ(dos.dg_ebk[i], dos.g_ebk[i] - dos.g_smooth[i]);
}

TEST(EbkDos, TruncationIsReported) {
  const auto p = monomial_system(3, 1e-3, 2);
  const auto grid = linspace(1.0, 10.0, 91);
  const auto dos = ebk_dos(p, grid, 0.1, 1, 2);
  EXPECT_TRUE(dos.truncated);
  EXPECT_GT(dos.missing_weight_bound, 0.0);
  const auto full = ebk_dos(p, grid, 0.1, 40, 40);
  EXPECT_FALSE(full.truncated);
  EXPECT_THROW(ebk_dos(p, grid, 0.0), DomainError);
}
