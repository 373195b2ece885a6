#include "qbat/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbat {

namespace {

void check_transition_index(const BatteryModel& b, int n, const char* op) {
  if (n < 0 || n >= b.dim - 1) {
    std::ostringstream msg;
    msg << op << ": subspace n=" << n << " has no upward transition (0.."
        << b.dim - 2 << ")";
    throw NumericError(msg.str());
  }
}

}  // namespace

double gamma_eff(const BatteryModel& b, const ChargerParams& c, int n) {
  b.validate();
  c.validate();
  check_transition_index(b, n, "gamma_eff");
  const Complex dd = c.detuning_product();
  const double ga = c.g * b.ladder_coeffs[n];
  const Complex den = ga * ga - dd;
  if (std::abs(den) <= defaults::resonance_rel_tol * std::abs(dd) ||
      den == Complex(0.0, 0.0)) {
    std::ostringstream msg;
    msg << "gamma_eff: resonant denominator in subspace n=" << n;
    throw NumericError(msg.str());
  }
  const double amp = c.Omega * ga / std::abs(den);
  return c.gamma_eg * amp * amp;
}

double optimal_coupling(const BatteryModel& b, const ChargerParams& c, int n) {
  b.validate();
  c.validate();
  if (n == b.dim - 1) {
    throw NumericError(
        "optimal_coupling: top level has no transition (A_top = 0)");
  }
  check_transition_index(b, n, "optimal_coupling");
  return std::sqrt(std::abs(c.detuning_product())) / b.ladder_coeffs[n];
}

double optimized_rate_uniform(const ChargerParams& c) {
  c.validate();
  const Complex dd = c.detuning_product();
  const double mod = std::abs(dd);
  const double s = std::sin(0.5 * std::arg(dd));
  if (mod == 0.0 || std::abs(s) < 1e-15) {
    throw NumericError(
        "optimized_rate_uniform: phi = 0 makes the optimum formula singular");
  }
  return c.gamma_eg * c.Omega * c.Omega / (4.0 * mod * s * s);
}

double quenched_coupling(const BatteryModel& b, const ChargerParams& c,
                         const ComplexMatrix& rho_b) {
  if (b.kind != BatteryKind::TruncatedHO) {
    throw NumericError(
        "quenched_coupling: quench rule is defined for the truncated "
        "oscillator battery only");
  }
  double nbar = 0.0;
  for (int n = 0; n < b.dim; ++n) {
    nbar += b.level_energies[n] * std::real(rho_b(n, n));
  }
  nbar /= b.energy_quantum;
  if (nbar < -1e-9) {
    std::ostringstream msg;
    msg << "quenched_coupling: negative mean excitation " << nbar;
    throw NumericError(msg.str());
  }
  nbar = std::max(nbar, 0.0);
  return std::sqrt(std::abs(c.detuning_product()) / (nbar + 1.0));
}

QuenchSchedule quench_schedule_ho(
    const BatteryModel& b, const ChargerParams& c,
    std::span<const double> quench_times,
    const std::function<ComplexMatrix(double)>& battery_state_at) {
  if (b.kind != BatteryKind::TruncatedHO) {
    throw NumericError("quench_schedule_ho: battery must be a truncated "
                       "oscillator");
  }
  double prev = 0.0;
  for (double tau : quench_times) {
    if (!(tau > prev)) {
      throw NumericError(
          "quench_schedule_ho: quench times must be strictly increasing and "
          "positive");
    }
    prev = tau;
  }
  QuenchSchedule schedule;
  schedule.segments.push_back({0.0, optimal_coupling(b, c, 0)});
  for (double tau : quench_times) {
    schedule.segments.push_back(
        {tau, quenched_coupling(b, c, battery_state_at(tau))});
  }
  return schedule;
}

QuenchRun run_quenched(const BatteryModel& b, const ChargerParams& c,
                       const DensityMatrix& rho_b0,
                       std::span<const double> quench_times,
                       std::span<const double> t_grid, OdeTolerances tol,
                       bool full_engine) {
  if (t_grid.empty()) throw NumericError("run_quenched: empty grid");
  const double t_end = t_grid.back();
  double prev = 0.0;
  std::vector<double> boundaries;
  for (double tau : quench_times) {
    if (!(tau > prev)) {
      throw NumericError("run_quenched: quench times must be strictly "
                         "increasing and positive");
    }
    prev = tau;
    if (tau < t_end) boundaries.push_back(tau);
  }
  boundaries.push_back(t_end);

  QuenchRun out;
  ChargerParams params = c;
  params.g = optimal_coupling(b, c, 0);
  out.schedule.segments.push_back({0.0, params.g});

  // The evolving state: battery-only for the effective engine, the full
  // composite state for the full engine (continuous across quenches).
  DensityMatrix state = rho_b0;
  if (full_engine) {
    const int d = b.dim;
    ComplexMatrix rho0 = ComplexMatrix::Zero(3 * d, 3 * d);
    rho0.block(kQutritG * d, kQutritG * d, d, d) = rho_b0.rho;
    state = DensityMatrix{std::move(rho0)};
  }

  double seg_start = 0.0;
  std::size_t grid_idx = 0;
  for (std::size_t seg = 0; seg < boundaries.size(); ++seg) {
    const double seg_end = boundaries[seg];
    // Shifted sub-grid: segment-local times of the grid points inside the
    // segment plus both endpoints.
    std::vector<double> sub = {0.0};
    std::vector<bool> keep = {grid_idx < t_grid.size() &&
                              t_grid[grid_idx] == seg_start};
    if (keep.back()) ++grid_idx;
    while (grid_idx < t_grid.size() && t_grid[grid_idx] <= seg_end) {
      sub.push_back(t_grid[grid_idx] - seg_start);
      keep.push_back(true);
      ++grid_idx;
    }
    if (sub.back() != seg_end - seg_start) {
      sub.push_back(seg_end - seg_start);
      keep.push_back(false);
    }

    Trajectory piece;
    ComplexMatrix battery_at_end;
    if (full_engine) {
      ComplexMatrix composite_end;
      piece = propagate_composite_state(b, params, state, sub, tol,
                                        &composite_end);
      state = DensityMatrix{std::move(composite_end)};
      battery_at_end = piece.states.back();
    } else {
      PropagateOptions opt;
      opt.tol = tol;
      piece = propagate(effective_battery_generator(b, params), state, sub,
                        opt);
      if (piece.states.empty()) {
        state = DensityMatrix::from_populations(piece.populations.back());
      } else {
        state = DensityMatrix{piece.states.back()};
      }
      battery_at_end = state.rho;
    }
    for (std::size_t i = 0; i < piece.size(); ++i) {
      if (!keep[i]) continue;
      out.trajectory.times.push_back(piece.times[i] + seg_start);
      if (piece.states.empty()) {
        out.trajectory.populations.push_back(piece.populations[i]);
      } else {
        out.trajectory.states.push_back(piece.states[i]);
      }
      if (!piece.qutrit_ground_population.empty()) {
        out.trajectory.qutrit_ground_population.push_back(
            piece.qutrit_ground_population[i]);
      }
    }

    if (seg + 1 < boundaries.size()) {
      params.g = quenched_coupling(b, params, battery_at_end);
      out.schedule.segments.push_back({seg_end, params.g});
    }
    seg_start = seg_end;
  }
  return out;
}

SaturationReport saturation_time(const Trajectory& traj, const BatteryModel& b,
                                 double threshold_fraction,
                                 std::span<const double> quench_times) {
  if (!(threshold_fraction > 0.0) || !(threshold_fraction < 1.0)) {
    throw NumericError("saturation_time: threshold must be in (0, 1)");
  }
  if (traj.ergotropy.size() != traj.size() || traj.size() == 0) {
    throw NumericError("saturation_time: trajectory not annotated");
  }
  const double target = threshold_fraction * b.max_ergotropy();
  SaturationReport report;
  report.threshold = threshold_fraction;
  report.quench_times_applied.assign(quench_times.begin(), quench_times.end());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.ergotropy[i] >= target) {
      if (i == 0) {
        report.time = traj.times[0];
      } else {
        const double e0 = traj.ergotropy[i - 1];
        const double e1 = traj.ergotropy[i];
        const double frac = (target - e0) / (e1 - e0);
        report.time =
            traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]);
      }
      report.pre_quench =
          !report.quench_times_applied.empty() &&
          report.time < report.quench_times_applied.back();
      return report;
    }
  }
  std::ostringstream msg;
  msg << "saturation_time: threshold " << target
      << " never crossed; final ergotropy " << traj.ergotropy.back();
  throw NumericError(msg.str());
}

}  // namespace qbat
