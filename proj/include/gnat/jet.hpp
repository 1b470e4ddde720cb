#pragma once
#include <cmath>

namespace gnat {

// Order-2 truncated Taylor number: (f, f', f'') at a point.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double t) { return {t, 1.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}
inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}
inline Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.d1, s * a.d2}; }
inline Jet2 operator*(const Jet2& a, double s) { return s * a; }
inline Jet2 operator+(const Jet2& a, double s) { return {a.value + s, a.d1, a.d2}; }
inline Jet2 operator+(double s, const Jet2& a) { return a + s; }
inline Jet2 operator-(const Jet2& a, double s) { return {a.value - s, a.d1, a.d2}; }
inline Jet2 operator-(double s, const Jet2& a) { return {s - a.value, -a.d1, -a.d2}; }

// Chain rule for a scalar outer function with derivatives (g, g', g'') at a.value.
inline Jet2 compose(const Jet2& a, double g, double g1, double g2) {
  return {g, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

// Caller guarantees a.value != 0.
inline Jet2 reciprocal(const Jet2& a) {
  const double v = 1.0 / a.value;
  return compose(a, v, -v * v, 2.0 * v * v * v);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
inline Jet2 operator/(const Jet2& a, double s) { return {a.value / s, a.d1 / s, a.d2 / s}; }
inline Jet2 operator/(double s, const Jet2& a) { return s * reciprocal(a); }

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return compose(a, e, e, e);
}
// Caller guarantees a.value > 0.
inline Jet2 log(const Jet2& a) {
  return compose(a, std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value));
}
// Real power; caller enforces the domain.
inline Jet2 pow(const Jet2& a, double r) {
  const double x = a.value;
  if (x == 0.0) {
    // Only reached for r == 0, 1 or r >= 2 (see SmoothFn domain checks).
    const double g = (r == 0.0) ? 1.0 : 0.0;
    const double g1 = (r == 1.0) ? 1.0 : 0.0;
    const double g2 = (r == 2.0) ? 2.0 : 0.0;
    return compose(a, g, g1, g2);
  }
  const double g = std::pow(x, r);
  return compose(a, g, r * g / x, r * (r - 1.0) * g / (x * x));
}

// First-order dual number; used to differentiate connection coefficients in t.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
inline Dual operator/(Dual a, double s) { return {a.v / s, a.d / s}; }

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

}  // namespace gnat
