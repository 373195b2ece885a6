#pragma once

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"
#include "qbat/numerics.hpp"

namespace qbat {

// Populations of the zero-ergotropy state with the spectrum of some rho:
// eigenvalues sorted descending, assigned to levels sorted by ascending
// energy.
struct PassiveState {
  RealVector populations;
};

// Tr[H_B rho] - Tr[H_B rho0].
double stored_energy(const DensityMatrix& rho, const DensityMatrix& rho0,
                     const BatteryModel& b);

PassiveState passive_state(const DensityMatrix& rho, const BatteryModel& b);

// Tr[H_B rho] minus the passive-state energy. Depends only on the spectrum
// of rho and the level energies; nonnegative up to numerical noise.
double ergotropy(const DensityMatrix& rho, const BatteryModel& b);

// Population-only variants for diagonal states.
double stored_energy_populations(const RealVector& p, const RealVector& p0,
                                 const BatteryModel& b);
double ergotropy_populations(const RealVector& p, const BatteryModel& b);

// diag(exp(-beta E_n))/Z. beta = +infinity gives the ground projector,
// beta = 0 the maximally mixed state.
DensityMatrix thermal_state(const BatteryModel& b, double beta);

// Argmax over diagonal populations; ties break toward the higher level.
int most_populated_level(const DensityMatrix& rho);
int most_populated_level(const RealVector& populations);

// Fills populations, stored energy (relative to the first sample),
// ergotropy, and most-populated level for every sample of a propagated
// trajectory. Verifies the per-sample population sum.
void annotate_observables(Trajectory& traj, const BatteryModel& b);

}  // namespace qbat
