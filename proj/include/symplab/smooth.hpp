#pragma once

#include <cmath>

namespace symplab {

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1]; C2 at both ends.
inline double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

inline double smoothstep5_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double y = x * (1.0 - x);
  return 30.0 * y * y;
}

/// Antiderivative of smoothstep5 on [0, 1], zero at 0.
inline double smoothstep5_integral(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.5 + (x - 1.0);
  const double x4 = x * x * x * x;
  return x4 * (x * (x - 3.0) + 2.5);
}

/// C-infinity monotone step from 0 (x <= 0) to 1 (x >= 1) built from exp(-1/x).
inline double smooth_transition(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

inline double smooth_transition_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  const double s = a + b;
  return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / (s * s);
}

}  // namespace symplab
