#pragma once

// Embedded Dormand-Prince 5(4) integrator for non-autonomous systems
// y' = f(t, y), with mesh replay so that a trajectory can be re-run on the
// exact step sequence of a reference solve (used for step-halving checks and
// for finite-difference Jacobians that are smooth in the initial point).

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

namespace symplab::ode {

struct StepSizeUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  double rtol = 1e-10;
  double atol = 1e-13;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  int max_steps = 200000;
};

template <class State>
struct Solution {
  State y;
  std::vector<double> mesh;  ///< accepted step boundaries, mesh.front() = t0, mesh.back() = t1
  int rejected = 0;
};

namespace detail {

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

/// One step of size h; returns the 5th-order solution and writes the embedded error estimate.
template <class State, class Rhs>
State dp_step(const Rhs& f, double t, const State& y, double h, State* err) {
  const State k1 = f(t, y);
  const State k2 = f(t + c2 * h, State(y + h * a21 * k1));
  const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
  const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  const State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  if (err) {
    const State k7 = f(t + h, y5);
    *err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  }
  return y5;
}

template <class State>
double error_norm(const State& err, const State& y0, const State& y1, const Settings& s) {
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(err.size()); ++i) {
    const double scale = s.atol + s.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

}  // namespace detail

/// Adaptive integration from t0 to t1 (t1 > t0). State must be an Eigen vector.
template <class State, class Rhs>
Solution<State> integrate_adaptive(const Rhs& f, double t0, double t1, const State& y0,
                                   const Settings& settings = {}) {
  Solution<State> sol{y0, {t0}, 0};
  if (t1 == t0) return sol;
  if (t1 < t0) throw std::invalid_argument("integrate_adaptive: t1 must not precede t0");

  double t = t0;
  double h = std::min(settings.initial_step, t1 - t0);
  State err = y0;
  int steps = 0;
  while (t < t1) {
    if (++steps > settings.max_steps) throw StepSizeUnderflow("integrate_adaptive: step budget exhausted");
    const bool last = t + h >= t1;
    // The step is recomputed from the mesh points so a replay on the mesh is bit-identical.
    const double t_next = last ? t1 : t + h;
    const double step = t_next - t;
    const State y_new = detail::dp_step(f, t, sol.y, step, &err);
    const double norm = detail::error_norm(err, sol.y, y_new, settings);
    if (std::isfinite(norm) && norm <= 1.0) {
      t = t_next;
      sol.y = y_new;
      sol.mesh.push_back(t);
      const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      h = step * grow;
    } else {
      ++sol.rejected;
      const double shrink = std::isfinite(norm) ? std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.5) : 0.1;
      h = step * shrink;
      if (h < settings.min_step) {
        throw StepSizeUnderflow("integrate_adaptive: step size underflow at t = " + std::to_string(t));
      }
    }
  }
  return sol;
}

/// Fixed-step replay on a given mesh.
template <class State, class Rhs>
State integrate_on_mesh(const Rhs& f, std::span<const double> mesh, const State& y0) {
  State y = y0;
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    y = detail::dp_step<State>(f, mesh[i - 1], y, mesh[i] - mesh[i - 1], nullptr);
  }
  return y;
}

/// Mesh with every step split at its midpoint.
inline std::vector<double> halved_mesh(std::span<const double> mesh) {
  std::vector<double> out;
  out.reserve(2 * mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (i > 0) out.push_back(0.5 * (mesh[i - 1] + mesh[i]));
    out.push_back(mesh[i]);
  }
  return out;
}

}  // namespace symplab::ode
