#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"

namespace qbat {

// Effective transition rate |g n> -> |g n+1>:
//   gamma_eg Omega^2 g^2 A_n^2 / |g^2 A_n^2 - Delta~ delta~|^2.
double gamma_eff(const BatteryModel& b, const ChargerParams& c, int n);

// Coupling maximizing gamma_eff in subspace n: g = sqrt(|Delta~ delta~|)/A_n.
double optimal_coupling(const BatteryModel& b, const ChargerParams& c, int n);

// Value of gamma_eff at the optimum (uniform ladder; A_n-independent):
//   gamma_eg Omega^2 / (4 |Delta~ delta~| sin^2(phi/2)), phi = arg(Delta~ delta~).
double optimized_rate_uniform(const ChargerParams& c);

// Piecewise-constant coupling schedule.
struct QuenchSegment {
  double start_time = 0.0;  // absolute units
  double g = 0.0;
};

struct QuenchSchedule {
  std::vector<QuenchSegment> segments;  // first starts at 0
};

// Coupling re-optimized for the instantaneous mean excitation:
// g = sqrt(|Delta~ delta~| / (nbar + 1)), nbar = Tr[rho_B H_B]/E_B.
// Defined for the truncated-oscillator battery only.
double quenched_coupling(const BatteryModel& b, const ChargerParams& c,
                         const ComplexMatrix& rho_b);

// Builds the schedule for the given quench times (absolute units, strictly
// increasing, positive) by querying the battery state at each quench moment.
// The initial segment uses optimal_coupling(b, c, 0).
QuenchSchedule quench_schedule_ho(
    const BatteryModel& b, const ChargerParams& c,
    std::span<const double> quench_times,
    const std::function<ComplexMatrix(double)>& battery_state_at);

// Quenched run: propagates segment by segment, re-optimizing g at each
// quench time from the running state per the rule above. Engine full runs
// the composite master equation; otherwise the effective one.
struct QuenchRun {
  Trajectory trajectory;
  QuenchSchedule schedule;
};

QuenchRun run_quenched(const BatteryModel& b, const ChargerParams& c,
                       const DensityMatrix& rho_b0,
                       std::span<const double> quench_times,
                       std::span<const double> t_grid, OdeTolerances tol,
                       bool full_engine);

struct SaturationReport {
  double time = 0.0;       // absolute units; multiply by gamma_eg for paper units
  double threshold = 0.0;  // fraction of max ergotropy used
  std::vector<double> quench_times_applied;
  bool pre_quench = false;  // crossed before the last quench
};

// First time the ergotropy reaches threshold_fraction * max_ergotropy, with
// linear interpolation between grid samples. Requires an annotated
// trajectory; throws if the threshold is never crossed.
SaturationReport saturation_time(const Trajectory& traj, const BatteryModel& b,
                                 double threshold_fraction,
                                 std::span<const double> quench_times = {});

}  // namespace qbat
