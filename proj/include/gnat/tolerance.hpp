#pragma once
#include <cmath>
#include <initializer_list>

namespace gnat {

// Default relative tolerance for deciding that an exact equality of the theory holds.
inline constexpr double kDefaultTolerance = 1e-9;

// |x| <= tol * (1 + scale), scale = sum of absolute values of the additive terms of x.
inline bool is_zero(double x, double scale, double tol = kDefaultTolerance) {
  return std::abs(x) <= tol * (1.0 + scale);
}

inline double abs_sum(std::initializer_list<double> terms) {
  double s = 0.0;
  for (double t : terms) s += std::abs(t);
  return s;
}

}  // namespace gnat
