#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hotrace/quadrature.hpp"
#include "hotrace/roots.hpp"
#include "hotrace/special_functions.hpp"
#include "support.hpp"

using namespace hotrace;
using hotrace::test::rel_err;

TEST(DoubleFactorial, SmallValues) {
  EXPECT_EQ(double_factorial(7), 105);
  EXPECT_EQ(double_factorial(0), 1);
  EXPECT_EQ(double_factorial(-1), 1);
  EXPECT_EQ(double_factorial(8), 384);
  EXPECT_THROW(double_factorial(-2), DomainError);
}

TEST(Binomial, EdgeCases) {
  EXPECT_EQ(binomial(6, 3), 20);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(5, 6), 0);
  EXPECT_EQ(binomial(3, -1), 0);
}

namespace {
// P_n(x) = 2^{-n} sum_k (-1)^k C(n,k) C(2n-2k, n) x^{n-2k}
Rational explicit_legendre(int n, const Rational& x) {
  Rational sum = 0;
  for (int k = 0; 2 * k <= n; ++k) {
    Rational term = Rational(binomial(n, k) * binomial(2 * n - 2 * k, n));
    for (int p = 0; p < n - 2 * k; ++p) term *= x;
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum / Rational(BigInt(1) << n);
}
}  // namespace

TEST(Legendre, TrivialValues) {
  EXPECT_EQ(legendre_p(0, 0.37), 1.0);
  EXPECT_EQ(legendre_p(2, 1.0), 1.0);
  EXPECT_EQ(legendre_p(2, Rational(1)), Rational(1));
}

TEST(Legendre, ExactRationalP4At2) {
  EXPECT_EQ(legendre_p(4, Rational(2)), Rational(443, 8));
  // (35 x^4 - 30 x^2 + 3)/8 at x = 2
  EXPECT_EQ(Rational(35 * 16 - 30 * 4 + 3, 8), Rational(443, 8));
}

TEST(Legendre, RecurrenceMatchesExplicitSumUpToTen) {
  for (int n = 0; n <= 10; ++n) {
    for (const Rational& x : {Rational(0), Rational(1, 3), Rational(-7, 5), Rational(2), Rational(11, 2)}) {
      EXPECT_EQ(legendre_p(n, x), explicit_legendre(n, x)) << "n=" << n;
    }
  }
}

TEST(Legendre, CoefficientTableDenominators) {
  const auto table = legendre_coefficient_table<Rational>(10);
  auto lcm_den = [](const std::vector<Rational>& row) {
    BigInt den = 1;
    for (const auto& c : row) {
      const BigInt d = boost::multiprecision::denominator(c);
      den = den / boost::multiprecision::gcd(den, d) * d;
    }
    return den;
  };
  EXPECT_EQ(lcm_den(table[4]), 8);
  EXPECT_EQ(lcm_den(table[6]), 16);
  EXPECT_EQ(lcm_den(table[8]), 128);
  EXPECT_EQ(lcm_den(table[10]), 256);
  for (int n = 0; n <= 10; ++n) {
    for (std::size_t m = 0; m < table[n].size(); ++m) {
      // coefficient of x^m from the explicit sum
      const int k2 = n - static_cast<int>(m);
      Rational want = 0;
      if (k2 % 2 == 0) {
        const int k = k2 / 2;
        want = Rational(binomial(n, k) * binomial(2 * n - 2 * k, n)) / Rational(BigInt(1) << n);
        if (k % 2) want = -want;
      }
      EXPECT_EQ(table[n][m], want);
    }
  }
}

TEST(Legendre, DerivativeValuesAndFiniteDifference) {
  EXPECT_EQ(legendre_p_derivative(1, 0.7), 1.0);
  EXPECT_EQ(legendre_p_derivative(2, 0.0), 0.0);
  const double h = 1e-6, x = 0.3;
  const double fd = (legendre_p(5, x + h) - legendre_p(5, x - h)) / (2 * h);
  EXPECT_NEAR(legendre_p_derivative(5, x), fd, 1e-8);
  // regular at the end points: P'_n(1) = n(n+1)/2
  for (int n = 1; n <= 30; ++n) EXPECT_NEAR(legendre_p_derivative(n, 1.0), n * (n + 1) / 2.0, 1e-9 * n * n);
}

// ---------------------------------------------------------------------------

TEST(Kummer, TrivialAndIdentity) {
  EXPECT_EQ(kummer_1f1(3.5, {0.0, 0.0}), Complex(1.0, 0.0));
  EXPECT_LT(rel_err(kummer_1f1(2.0, {1.0, 0.0}), Complex(std::exp(1.0) - 1.0, 0.0)), 1e-14);
  // 1F1(1;2;z) = (e^z - 1)/z on the imaginary axis too
  for (double y : {0.5, 3.0, 12.0, 37.0, 80.0, 140.0}) {
    const Complex z(0.0, y);
    EXPECT_LT(rel_err(kummer_1f1(2.0, z), (std::exp(z) - 1.0) / z), 1e-12) << y;
  }
}

TEST(Kummer, BruteForceSeriesAt3i) {
  const Complex z(0.0, 3.0);
  std::complex<long double> term = 1.0L, sum = 1.0L;
  const std::complex<long double> zl(0.0L, 3.0L);
  for (long n = 0; n < 1000000; ++n) {
    term *= zl / (4.0L + n);
    sum += term;
  }
  const Complex want(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  EXPECT_LT(rel_err(kummer_1f1(4.0, z), want), 1e-13);
}

TEST(Kummer, ContiguousRelationRandom) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ub(1.0, 10.0), ur(0.0, 20.0), uphi(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 300; ++i) {
    const double b = ub(rng);
    const Complex z = std::polar(ur(rng), uphi(rng));
    const Complex lhs = kummer_1f1(b, z);
    const Complex rhs = 1.0 + z / b * kummer_1f1(b + 1.0, z);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs))) << "b=" << b << " z=" << z;
  }
}

TEST(Kummer, IntegralRepresentationOnImaginaryAxis) {
  // 1F1(1;b;iy) = 2(b-1) int_0^1 s^{2b-3} e^{iy(1-s^2)} ds for b > 1
  for (double b : {1.5, 2.5, 3.0, 4.0, 6.0}) {
    for (double y : {-90.0, -33.0, 2.0, 4.5, 17.0, 55.0, 100.0}) {
      auto f = [&](double s) { return 2.0 * (b - 1.0) * std::pow(s, 2.0 * b - 3.0) * std::polar(1.0, y * (1.0 - s * s)); };
      const Complex want = test::gk_complex(f, 0.0, 1.0, 40);
      EXPECT_LT(rel_err(kummer_1f1(b, {0.0, y}), want), 1e-12) << "b=" << b << " y=" << y;
    }
  }
}

TEST(Kummer, RejectsBadParameter) { EXPECT_THROW(kummer_1f1(0.0, {1.0, 0.0}), DomainError); }

// ---------------------------------------------------------------------------

TEST(ErfSqrtI, ZeroAndReflection) {
  EXPECT_EQ(erf_sqrt_i(0.0), Complex(0.0, 0.0));
  for (double x : {0.3, 2.0, 9.0, 150.0}) {
    const Complex up = erf_sqrt_i(x), down = erf_sqrt_i_signed(-x);
    EXPECT_EQ(down, std::conj(up));
  }
  EXPECT_THROW(erf_sqrt_i(-1.0), DomainError);
}

TEST(ErfSqrtI, RayIntegral) {
  // erf(sqrt(i x)) = (2/sqrt(pi)) sqrt(i) int_0^{sqrt x} e^{-i s^2} ds
  //               = (1/sqrt(pi)) sqrt(i) int_0^x e^{-i u} u^{-1/2} du
  const Complex sqrt_i = std::polar(1.0, std::numbers::pi / 4);
  for (double x : {1.0, 3.9, 4.1, 10.0, 100.0, 1000.0}) {
    auto f = [](double s) { return std::polar(1.0, -s * s); };
    const int panels = 1 + static_cast<int>(x / 2.0);
    const Complex want = 2.0 / std::sqrt(std::numbers::pi) * sqrt_i * test::gk_complex(f, 0.0, std::sqrt(x), panels);
    EXPECT_LT(rel_err(erf_sqrt_i(x), want), 1e-10) << x;
  }
}

TEST(ErfSqrtI, LargeArgumentAsymptotic) {
  for (double x : {2500.0, 10000.0}) {
    const Complex w = std::sqrt(Complex(0.0, x));
    Complex series = 1.0, term = 1.0;
    for (int n = 1; n < 12; ++n) {
      term *= -(2.0 * n - 1.0) / (2.0 * w * w);
      series += term;
    }
    const Complex want = 1.0 - std::exp(-w * w) / (w * std::sqrt(std::numbers::pi)) * series;
    EXPECT_LT(rel_err(erf_sqrt_i(x), want), 1e-10) << x;
  }
}

TEST(Fresnel, KnownValues) {
  const auto [c1, s1] = fresnel_cs(1.0);
  EXPECT_NEAR(c1, 0.7798934003768228, 1e-12);
  EXPECT_NEAR(s1, 0.4382591473903548, 1e-12);
  const auto [cm, sm] = fresnel_cs(-1.0);
  EXPECT_EQ(cm, -c1);
  EXPECT_EQ(sm, -s1);
  const auto [c0, s0] = fresnel_cs(0.0);
  EXPECT_EQ(c0, 0.0);
  EXPECT_EQ(s0, 0.0);
  // definition by quadrature
  for (double v : {0.4, 2.3, 5.0}) {
    const double c = test::gk_real([](double t) { return std::cos(0.5 * std::numbers::pi * t * t); }, 0.0, v, 20);
    const double s = test::gk_real([](double t) { return std::sin(0.5 * std::numbers::pi * t * t); }, 0.0, v, 20);
    const auto [fc, fs] = fresnel_cs(v);
    EXPECT_NEAR(fc, c, 1e-12);
    EXPECT_NEAR(fs, s, 1e-12);
  }
}

TEST(ErfOverArg, SmallArgumentBranchIsContinuous) {
  const double lim = 2.0 / std::sqrt(std::numbers::pi);
  EXPECT_NEAR(std::abs(erf_over_arg_sqrt_i(0.0) - lim), 0.0, 1e-15);
  EXPECT_LT(rel_err(erf_over_arg_sqrt_i(0.99e-8), erf_over_arg_sqrt_i(1.01e-8)), 1e-8);
  EXPECT_LT(rel_err(erf_over_arg_sqrt_i(-3.0), std::conj(erf_over_arg_sqrt_i(3.0))), 1e-15);
}

// ---------------------------------------------------------------------------

TEST(QuadratureRule, Invariants) {
  for (int n : {1, 2, 3, 5, 10, 33, 64, 100, 200}) {
    const auto& rule = gauss_legendre(n);
    ASSERT_EQ(rule.order(), n);
    double wsum = 0.0;
    for (double w : rule.weights()) {
      EXPECT_GT(w, 0.0);
      wsum += w;
    }
    EXPECT_NEAR(wsum, 2.0, 1e-13) << n;
    const auto& x = rule.nodes();
    for (int i = 0; i < n; ++i) {
      EXPECT_GE(x[i], -1.0);
      EXPECT_LE(x[i], 1.0);
      if (i > 0) {
        EXPECT_LT(x[i - 1], x[i]);
      }
      EXPECT_EQ(x[i], -x[n - 1 - i]);
    }
  }
}

TEST(QuadratureRule, ExactForPolynomials) {
  for (int n : {1, 2, 4, 7, 20, 50, 200}) {
    const auto& rule = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      const double got = rule.integrate([deg](double t) { return std::pow(t, deg); }, -1.0, 1.0);
      const double want = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(got, want, deg == 2 * n - 1 ? 1e-13 : 1e-12) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(QuadratureRule, PanelsAndIntervals) {
  const auto& rule = gauss_legendre(20);
  EXPECT_NEAR(rule.integrate_panels([](double t) { return std::cos(t); }, 0.0, 30.0, 7), std::sin(30.0), 1e-13);
  EXPECT_THROW(QuadratureRule::gauss_legendre(0), DomainError);
}

TEST(Roots, BracketedRoot) {
  const double r = bracketed_root([](double x) { return x * x * x - 2.0; }, 0.0, 3.0);
  EXPECT_NEAR(r, std::cbrt(2.0), 1e-15);
  EXPECT_THROW(bracketed_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
}
