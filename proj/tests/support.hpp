#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hotrace::test {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Adaptive Gauss-Kronrod of a complex-valued integrand over [a, b] split
/// into `panels` pieces; independent of the library's own quadrature.
template <typename F>
std::complex<double> gk_complex(F f, double a, double b, int panels = 1) {
  using boost::math::quadrature::gauss_kronrod;
  double re = 0.0, im = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, hi = (p + 1 == panels) ? b : lo + h;
    re += gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).real(); }, lo, hi, 10, 1e-13);
    im += gauss_kronrod<double, 61>::integrate([&](double t) { return f(t).imag(); }, lo, hi, 10, 1e-13);
  }
  return {re, im};
}

template <typename F>
double gk_real(F f, double a, double b, int panels = 1) {
  using boost::math::quadrature::gauss_kronrod;
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, hi = (p + 1 == panels) ? b : lo + h;
    s += gauss_kronrod<double, 61>::integrate(f, lo, hi, 10, 1e-13);
  }
  return s;
}

}  // namespace hotrace::test
