#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <vector>

#include "qbat/errors.hpp"
#include "qbat/numerics.hpp"

namespace qbat {

// Embedded Dormand-Prince 5(4) pair with PI step-size control, stepping
// exactly onto each requested grid time. State is any dense Eigen vector or
// matrix type (real or complex); Rhs is callable as rhs(t, y, dydt).
//
// The error norm is the scaled RMS norm
//   err = sqrt(mean_i (|e_i| / (abs_tol + rel_tol*max(|y_i|,|y1_i|)))^2).

namespace detail {

template <class State>
double scaled_error_norm(const State& err, const State& y0, const State& y1,
                         double abs_tol, double rel_tol) {
  const auto e = err.array().abs();
  const auto sc =
      abs_tol + rel_tol * y0.array().abs().max(y1.array().abs());
  return std::sqrt((e / sc).square().sum() /
                   static_cast<double>(err.size()));
}

inline void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) {
    throw NumericError("integrate_ode: empty time grid");
  }
  if (t_grid.front() != 0.0) {
    throw NumericError("integrate_ode: time grid must start at 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw NumericError("integrate_ode: time grid not strictly increasing");
    }
  }
}

}  // namespace detail

template <class State, class Rhs, class Observer>
void integrate_ode_observe(Rhs&& rhs, const State& y0,
                           std::span<const double> t_grid, OdeTolerances tol,
                           Observer&& observe) {
  detail::check_grid(t_grid);
  if (!(tol.rel > 0.0) || !(tol.abs > 0.0)) {
    throw NumericError("integrate_ode: tolerances must be positive");
  }

  State y = y0;
  observe(t_grid[0], y);
  if (t_grid.size() == 1) return;

  const double t_end = t_grid.back();
  double t = 0.0;

  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y;
  State ytmp = y, ynew = y, yerr = y;

  rhs(t, y, k1);

  // Initial step size: first-derivative heuristic refined by an Euler probe.
  double h;
  {
    const double d0 = detail::scaled_error_norm(y, y, y, tol.abs, tol.rel);
    const double d1 = detail::scaled_error_norm(k1, y, y, tol.abs, tol.rel);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
    h0 = std::min(h0, t_end);
    ytmp = y + h0 * k1;
    rhs(t + h0, ytmp, k2);
    yerr = k2 - k1;
    const double d2 =
        detail::scaled_error_norm(yerr, y, y, tol.abs, tol.rel) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15) {
      h1 = std::max(1e-6, h0 * 1e-3);
    } else {
      h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
    }
    h = std::min({100.0 * h0, h1, t_end});
  }

  // PI controller constants (order-5 pair).
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safety = 0.9;
  constexpr double fac_min = 0.2;   // max shrink per step
  constexpr double fac_max = 10.0;  // max growth per step
  double fac_old = 1e-4;
  bool last_rejected = false;

  std::size_t next_grid = 1;
  std::uint64_t n_steps = 0;
  constexpr std::uint64_t max_steps = 50'000'000;

  while (next_grid < t_grid.size()) {
    if (++n_steps > max_steps) {
      std::ostringstream msg;
      msg << "integrate_ode: step budget exhausted at t=" << t;
      throw NumericError(msg.str());
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "integrate_ode: step size underflow at t=" << t;
      throw NumericError(msg.str());
    }

    const double t_target = t_grid[next_grid];
    const double h_prop = h;  // restore after clamping onto the grid
    bool hit_grid = false;
    if (t + h >= t_target) {
      h = t_target - t;
      hit_grid = true;
    }

    // Dormand-Prince stages.
    ytmp = y + (h * (1.0 / 5.0)) * k1;
    rhs(t + h / 5.0, ytmp, k2);
    ytmp = y + (h * (3.0 / 40.0)) * k1 + (h * (9.0 / 40.0)) * k2;
    rhs(t + 3.0 * h / 10.0, ytmp, k3);
    ytmp = y + (h * (44.0 / 45.0)) * k1 + (h * (-56.0 / 15.0)) * k2 +
           (h * (32.0 / 9.0)) * k3;
    rhs(t + 4.0 * h / 5.0, ytmp, k4);
    ytmp = y + (h * (19372.0 / 6561.0)) * k1 + (h * (-25360.0 / 2187.0)) * k2 +
           (h * (64448.0 / 6561.0)) * k3 + (h * (-212.0 / 729.0)) * k4;
    rhs(t + 8.0 * h / 9.0, ytmp, k5);
    ytmp = y + (h * (9017.0 / 3168.0)) * k1 + (h * (-355.0 / 33.0)) * k2 +
           (h * (46732.0 / 5247.0)) * k3 + (h * (49.0 / 176.0)) * k4 +
           (h * (-5103.0 / 18656.0)) * k5;
    rhs(t + h, ytmp, k6);
    ynew = y + (h * (35.0 / 384.0)) * k1 + (h * (500.0 / 1113.0)) * k3 +
           (h * (125.0 / 192.0)) * k4 + (h * (-2187.0 / 6784.0)) * k5 +
           (h * (11.0 / 84.0)) * k6;
    rhs(t + h, ynew, ytmp);  // FSAL stage k7 in ytmp

    yerr = (h * (71.0 / 57600.0)) * k1 + (h * (-71.0 / 16695.0)) * k3 +
           (h * (71.0 / 1920.0)) * k4 + (h * (-17253.0 / 339200.0)) * k5 +
           (h * (22.0 / 525.0)) * k6 + (h * (-1.0 / 40.0)) * ytmp;

    const double err =
        detail::scaled_error_norm(yerr, y, ynew, tol.abs, tol.rel);

    const double fac11 = std::pow(std::max(err, 1e-30), expo1);
    if (err <= 1.0) {
      // Accept.
      t = hit_grid ? t_target : t + h;
      y.swap(ynew);
      k1.swap(ytmp);  // FSAL
      if (hit_grid) {
        // A clamped step says nothing about the natural scale; resume with
        // the controller's standing proposal.
        observe(t, y);
        ++next_grid;
        h = h_prop;
      } else {
        fac_old = std::max(err, 1e-4);
        double fac = fac11 / std::pow(fac_old, beta);
        fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
        double h_next = h / fac;
        if (last_rejected) h_next = std::min(h_next, h);
        h = h_next;
      }
      last_rejected = false;
    } else {
      last_rejected = true;
      h = h / std::min(1.0 / fac_min, fac11 / safety);
    }
  }
}

template <class State, class Rhs>
std::vector<State> integrate_ode(Rhs&& rhs, const State& y0,
                                 std::span<const double> t_grid,
                                 double rel_tol, double abs_tol) {
  std::vector<State> out;
  out.reserve(t_grid.size());
  integrate_ode_observe(rhs, y0, t_grid, OdeTolerances{rel_tol, abs_tol},
                        [&](double, const State& y) { out.push_back(y); });
  return out;
}

}  // namespace qbat
