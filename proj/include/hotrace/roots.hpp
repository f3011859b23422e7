#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hotrace/errors.hpp"

namespace hotrace {

struct RootTolerance {
  double x_rel = 1e-15;   // stop when the bracket is this narrow relative to |x|
  double f_abs = 0.0;     // stop when |f| <= f_abs
  int max_iter = 400;
};

/// Root of f in [lo, hi] given a sign change. Regula falsi (Illinois variant)
/// with a bisection step whenever the bracket fails to halve.
template <typename F>
double bracketed_root(F&& f, double lo, double hi, RootTolerance tol = {}) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "bracketed_root: no sign change on [" << lo << ", " << hi << "] (f=" << f_lo << ", "
        << f_hi << ")";
    throw DomainError(msg.str());
  }
  int side = 0;
  double width = hi - lo;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0 || std::abs(fx) <= tol.f_abs) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    const double new_width = hi - lo;
    if (new_width > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0 || std::abs(fm) <= tol.f_abs) return mid;
      if ((fm < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
        f_hi = fm;
      }
      side = 0;
    }
    width = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= tol.x_rel * scale || width == 0.0) {
      return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    }
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

}  // namespace hotrace
