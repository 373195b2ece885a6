#include "qbat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qbat {

namespace {

double energy_expectation(const ComplexMatrix& rho, const BatteryModel& b) {
  double e = 0.0;
  for (int n = 0; n < b.dim; ++n) {
    e += b.level_energies[n] * std::real(rho(n, n));
  }
  return e;
}

double energy_expectation(const RealVector& p, const BatteryModel& b) {
  double e = 0.0;
  for (int n = 0; n < b.dim; ++n) e += b.level_energies[n] * p[n];
  return e;
}

RealVector passive_from_spectrum(RealVector spectrum) {
  std::sort(spectrum.begin(), spectrum.end(), std::greater<double>());
  return spectrum;
}

double passive_energy(const RealVector& descending, const BatteryModel& b) {
  double e = 0.0;
  for (int n = 0; n < b.dim; ++n) e += b.level_energies[n] * descending[n];
  return e;
}

void check_dim(int dim, const BatteryModel& b, const char* op) {
  if (dim != b.dim) {
    std::ostringstream msg;
    msg << op << ": state dimension " << dim << " does not match battery dim "
        << b.dim;
    throw NumericError(msg.str());
  }
}

}  // namespace

double stored_energy(const DensityMatrix& rho, const DensityMatrix& rho0,
                     const BatteryModel& b) {
  check_dim(rho.dim(), b, "stored_energy");
  check_dim(rho0.dim(), b, "stored_energy");
  return energy_expectation(rho.rho, b) - energy_expectation(rho0.rho, b);
}

PassiveState passive_state(const DensityMatrix& rho, const BatteryModel& b) {
  check_dim(rho.dim(), b, "passive_state");
  const auto eig = hermitian_eigh(0.5 * (rho.rho + rho.rho.adjoint()));
  return {passive_from_spectrum(eig.eigenvalues)};
}

double ergotropy(const DensityMatrix& rho, const BatteryModel& b) {
  check_dim(rho.dim(), b, "ergotropy");
  const auto sigma = passive_state(rho, b);
  return energy_expectation(rho.rho, b) - passive_energy(sigma.populations, b);
}

double stored_energy_populations(const RealVector& p, const RealVector& p0,
                                 const BatteryModel& b) {
  check_dim(static_cast<int>(p.size()), b, "stored_energy");
  check_dim(static_cast<int>(p0.size()), b, "stored_energy");
  return energy_expectation(p, b) - energy_expectation(p0, b);
}

double ergotropy_populations(const RealVector& p, const BatteryModel& b) {
  check_dim(static_cast<int>(p.size()), b, "ergotropy");
  return energy_expectation(p, b) - passive_energy(passive_from_spectrum(p), b);
}

DensityMatrix thermal_state(const BatteryModel& b, double beta) {
  if (std::isnan(beta) || beta < 0.0) {
    throw ConfigError("thermal_state: beta must be nonnegative (or +inf)");
  }
  RealVector p = RealVector::Zero(b.dim);
  if (std::isinf(beta)) {
    p[0] = 1.0;  // unique ground level (energies strictly ascending)
  } else {
    const double e_min = b.level_energies.front();
    double z = 0.0;
    for (int n = 0; n < b.dim; ++n) {
      p[n] = std::exp(-beta * (b.level_energies[n] - e_min));
      z += p[n];
    }
    p /= z;
  }
  return DensityMatrix::from_populations(p);
}

int most_populated_level(const RealVector& populations) {
  int best = 0;
  for (int n = 1; n < populations.size(); ++n) {
    if (populations[n] >= populations[best]) best = n;  // ties -> higher level
  }
  return best;
}

int most_populated_level(const DensityMatrix& rho) {
  return most_populated_level(RealVector(rho.rho.diagonal().real()));
}

void annotate_observables(Trajectory& traj, const BatteryModel& b) {
  const std::size_t n = traj.size();
  const bool from_states = !traj.states.empty();
  if (from_states && traj.states.size() != n) {
    throw NumericError("annotate_observables: state count mismatch");
  }
  if (!from_states && traj.populations.size() != n) {
    throw NumericError("annotate_observables: population count mismatch");
  }
  if (from_states) {
    traj.populations.clear();
    traj.populations.reserve(n);
    for (const auto& s : traj.states) {
      traj.populations.emplace_back(s.diagonal().real());
    }
  }
  traj.stored_energy.assign(n, 0.0);
  traj.ergotropy.assign(n, 0.0);
  traj.most_populated.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double sum_err = std::abs(traj.populations[i].sum() - 1.0);
    if (sum_err > 1e-8) {
      std::ostringstream msg;
      msg << "annotate_observables: populations at t=" << traj.times[i]
          << " sum to 1 off by " << sum_err;
      throw NumericError(msg.str());
    }
    if (from_states) {
      DensityMatrix s{traj.states[i]};
      traj.stored_energy[i] =
          energy_expectation(s.rho, b) - energy_expectation(traj.states[0], b);
      traj.ergotropy[i] = ergotropy(s, b);
    } else {
      traj.stored_energy[i] = stored_energy_populations(
          traj.populations[i], traj.populations[0], b);
      traj.ergotropy[i] = ergotropy_populations(traj.populations[i], b);
    }
    traj.most_populated[i] = most_populated_level(traj.populations[i]);
  }
}

}  // namespace qbat
