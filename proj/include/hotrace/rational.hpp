#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hotrace {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

}  // namespace hotrace
