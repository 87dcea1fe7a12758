#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace burescone {

struct StepFailure : std::runtime_error {
  explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Controls for the embedded Dormand-Prince 5(4) stepper.
struct OdeControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  double safety = 0.9;
  double max_growth = 5.0;
  double min_shrink = 0.2;
};

namespace detail {

// Dormand-Prince coefficients (5th order solution, embedded 4th order error).
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_e[7] = {
    35.0 / 384 - 5179.0 / 57600,   0.0,
    500.0 / 1113 - 7571.0 / 16695, 125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200, 11.0 / 84 - 187.0 / 2100,
    -1.0 / 40,
};

}  // namespace detail

/// Integrate dy/dt = f(t, y) from t0 to t1 with one adaptive Dormand-Prince
/// 5(4) pass, writing the state at t1 back into y.
///
/// on_accept (optional) runs after every accepted step and may project the
/// state (the integration continues from the projected value). event
/// (optional) is a scalar function of (t, y); when an accepted step carries it
/// from >= 0 to < 0, the crossing is located by step bisection, y is left at
/// the crossing and the function returns the crossing time. Returns t1 when
/// no event fired. Throws StepFailure when the controller underflows.
template <class Vec, class Rhs>
double integrate_adaptive(const Rhs& f, double t0, double t1, Vec& y,
                          const OdeControl& ctrl = {},
                          const std::function<void(double, Vec&)>& on_accept = nullptr,
                          const std::function<double(double, const Vec&)>& event = nullptr) {
  if (t1 == t0) return t1;
  if (t1 < t0) throw std::invalid_argument("integrate_adaptive requires t1 >= t0");

  const double span = t1 - t0;
  const double h_min = 1e-14 * std::max({1.0, std::abs(t0), std::abs(t1)});

  auto err_norm = [&](const Vec& y0, const Vec& y1, const Vec& e) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double scale =
          ctrl.atol + ctrl.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double q = std::abs(e[i]) / scale;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(e.size()));
  };

  std::vector<Vec> k(7);
  // attempt one step of size h; on acceptance writes y_out/err_out
  auto try_step = [&](double t, const Vec& yin, double h, Vec& y_out, double& err_out) {
    k[0] = f(t, yin);
    for (int s = 1; s < 7; ++s) {
      Vec acc = yin;
      for (int j = 0; j < s; ++j) {
        if (detail::dp_a[s][j] != 0.0) acc += (h * detail::dp_a[s][j]) * k[j];
      }
      k[s] = f(t + detail::dp_c[s] * h, acc);
    }
    y_out = yin;
    for (int s = 0; s < 6; ++s) {
      if (detail::dp_a[6][s] != 0.0) y_out += (h * detail::dp_a[6][s]) * k[s];
    }
    Vec e = h * detail::dp_e[0] * k[0];
    for (int s = 1; s < 7; ++s) {
      if (detail::dp_e[s] != 0.0) e += (h * detail::dp_e[s]) * k[s];
    }
    err_out = err_norm(yin, y_out, e);
  };

  double t = t0;
  double h = span / 100.0;
  double prev_event = event ? event(t, y) : 1.0;

  while (t < t1) {
    h = std::min(h, t1 - t);
    Vec y_new;
    double err = 0.0;
    // reject/shrink loop
    for (;;) {
      try_step(t, y, h, y_new, err);
      if (err <= 1.0) break;
      const double factor =
          std::max(ctrl.min_shrink, ctrl.safety * std::pow(err, -0.2));
      h *= factor;
      if (h < h_min) {
        throw StepFailure("step size underflow at t = " + std::to_string(t));
      }
    }

    double t_new = t + h;
    if (event) {
      const double g = event(t_new, y_new);
      if (prev_event >= 0.0 && g < 0.0) {
        // bisect the step until the crossing is bracketed tightly
        double lo = 0.0, hi = h;
        Vec y_lo = y;
        for (int it = 0; it < 80 && (hi - lo) > 1e-15 * std::max(1.0, h); ++it) {
          const double mid = 0.5 * (lo + hi);
          Vec y_mid;
          double e_mid;
          try_step(t, y, mid, y_mid, e_mid);
          if (event(t + mid, y_mid) < 0.0) {
            hi = mid;
          } else {
            lo = mid;
            y_lo = y_mid;
          }
        }
        y = y_lo;
        if (on_accept) on_accept(t + lo, y);
        return t + lo;
      }
      prev_event = g;
    }

    y = y_new;
    t = t_new;
    if (on_accept) on_accept(t, y);

    const double factor = (err == 0.0)
                              ? ctrl.max_growth
                              : std::min(ctrl.max_growth,
                                         std::max(ctrl.min_shrink,
                                                  ctrl.safety * std::pow(err, -0.2)));
    h *= factor;
  }
  return t1;
}

}  // namespace burescone
