#pragma once
#include <cmath>
#include <cstdio>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gnat {

// Expression templates off: generic code mixes Rational arithmetic with template deduction.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

// Scalar traits shared by the double and exact-rational instantiations of the frame engine.
inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Rational& x) { return std::abs(to_double(x)); }

// Exact zero for rationals; |x| <= tol (1 + scale) for doubles.
inline bool scalar_is_zero(double x, double scale, double tol) {
  return std::abs(x) <= tol * (1.0 + scale);
}
inline bool scalar_is_zero(const Rational& x, double, double) { return x == 0; }

inline std::string scalar_to_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
inline std::string scalar_to_string(const Rational& x) { return x.str(); }

template <class T>
T scalar_from_double(double x) {
  return T(x);  // exact for Rational: every double is a dyadic rational
}

}  // namespace gnat
