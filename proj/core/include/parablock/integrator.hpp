#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "parablock/errors.hpp"
#include "parablock/fock.hpp"
#include "parablock/tolerances.hpp"

namespace parablock {

struct IntegratorOptions {
  double rtol = kTolerances.rtol;
  double atol = kTolerances.atol;
  double initial_step = 0.0;  ///< 0 selects automatically
  double max_step = 0.0;      ///< 0 means unbounded
  long max_steps = 10'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_calls = 0;
};

/// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.
///
/// `rhs(t, y, dydt)` writes the derivative. `on_sample(t, y)` is called at
/// every requested output time with a mutable state, so a caller may project
/// it (e.g. renormalize a trace); steps are clipped to land on those times
/// exactly. The first sample may equal the start time.
template <class Rhs, class OnSample>
IntegratorStats integrate_dopri5(Rhs&& rhs, double t0, Vector y, std::span<const double> t_out,
                                 OnSample&& on_sample, const IntegratorOptions& opt = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // Error weights: fifth-order minus embedded fourth-order solution.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegratorStats stats;
  const auto n = y.size();
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n), err(n);

  double t = t0;
  rhs(t, y, k1);
  ++stats.rhs_calls;

  auto error_norm = [&](const Vector& yold, const Vector& ynew) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(yold(i)), std::abs(ynew(i)));
      const double r = std::abs(err(i)) / sc;
      acc += r * r;
    }
    return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
  };

  double h_natural = opt.initial_step;
  if (h_natural <= 0.0) {
    // Hairer's starting-step heuristic, first-order part.
    double d0 = 0.0, d1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d0 += std::norm(y(i)) / (sc * sc);
      d1 += std::norm(k1(i)) / (sc * sc);
    }
    d0 = std::sqrt(d0 / std::max<double>(1.0, static_cast<double>(n)));
    d1 = std::sqrt(d1 / std::max<double>(1.0, static_cast<double>(n)));
    h_natural = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }

  double err_prev = 1e-4;
  std::size_t next = 0;
  while (next < t_out.size() && t_out[next] <= t) {
    on_sample(t_out[next], y);
    ++next;
  }

  while (next < t_out.size()) {
    const double target = t_out[next];
    if (opt.max_step > 0.0) h_natural = std::min(h_natural, opt.max_step);
    double h = h_natural;
    bool lands = false;
    if (t + h >= target) {
      h = target - t;
      lands = true;
    }
    if (h <= 1e-14 * std::max(1.0, std::abs(t)))
      throw SolverError("integrator: step size underflow at t = " + std::to_string(t));
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw SolverError("integrator: step budget exhausted at t = " + std::to_string(t));

    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y5, k7);
    stats.rhs_calls += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(y, y5);
    if (!std::isfinite(en))
      throw SolverError("integrator: non-finite error estimate at t = " + std::to_string(t));

    if (en <= 1.0) {
      ++stats.accepted;
      t = lands ? target : t + h;
      y.swap(y5);
      k1.swap(k7);  // FSAL
      bool sampled = false;
      while (next < t_out.size() && t_out[next] <= t) {
        on_sample(t_out[next], y);
        ++next;
        sampled = true;
      }
      if (sampled) {
        // The sampler may have projected y; keep the FSAL derivative consistent.
        rhs(t, y, k1);
        ++stats.rhs_calls;
      }
      const double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      err_prev = std::max(en, 1e-4);
      // A step clipped short to hit a sample time does not shrink the natural step.
      const double grown = h * std::clamp(fac, 0.2, 10.0);
      h_natural = lands ? std::max(grown, h_natural) : grown;
    } else {
      ++stats.rejected;
      h_natural = h * std::max(0.2, 0.9 * std::pow(en, -1.0 / 5));
    }
  }
  return stats;
}

}  // namespace parablock
