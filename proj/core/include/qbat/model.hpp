#pragma once

#include <string>
#include <vector>

#include "qbat/numerics.hpp"

namespace qbat {

enum class BatteryKind { UniformLadder, LargeSpin, TruncatedHO };

std::string to_string(BatteryKind kind);

// Finite-dimensional battery: level energies plus the ladder coefficients
// A_n coupling |n> to |n+1>. All coefficients are strictly positive, so the
// only absorbing level of the charging chain is the top one.
struct BatteryModel {
  BatteryKind kind = BatteryKind::UniformLadder;
  int dim = 0;
  double energy_quantum = 1.0;          // E_B
  std::vector<double> level_energies;   // ascending, size dim
  std::vector<double> ladder_coeffs;    // A_n, size dim-1

  // levels_above_ground = N, dim = N+1, energies E_B * n, A_n = 1.
  static BatteryModel uniform_ladder(int levels_above_ground, double e_b);
  // Spin-j battery, dim = 2j+1 (j integer or half-integer), energies E_B * m
  // with m = -j..j, A the raising part of the collective angular momentum.
  static BatteryModel large_spin(double j, double e_b);
  // Truncated oscillator, dim = N+1, energies E_B * n, A_n = sqrt(n+1).
  static BatteryModel truncated_ho(int levels_above_ground, double e_b);

  double spin_j() const { return 0.5 * (dim - 1); }
  // Angular-momentum quantum number of level n (LargeSpin reporting).
  double spin_m(int level) const { return level - spin_j(); }
  // Gap between top and bottom level = max extractable energy.
  double max_ergotropy() const {
    return level_energies.back() - level_energies.front();
  }
  ComplexMatrix hamiltonian() const;

  void validate() const;
};

// Qutrit charger in the rotating frame: detunings of |h> and |e>, drive
// intensity on g<->h, decay rates for h->g, e->g, h->e, and the
// charger-battery coupling g on |e><h| (x) A^dag.
struct ChargerParams {
  double Delta = 0.0;     // detuning of |h>
  double delta = 0.0;     // detuning of |e>
  double Omega = 0.0;     // drive intensity
  double gamma_hg = 0.0;
  double gamma_eg = 0.0;
  double gamma_he = 0.0;
  double g = 0.0;         // charger-battery coupling

  // Complex detunings absorbing the decay out of each excited level.
  Complex Delta_tilde() const {
    return {Delta, -0.5 * (gamma_hg + gamma_he)};
  }
  Complex delta_tilde() const { return {delta, -0.5 * gamma_eg}; }
  Complex detuning_product() const { return Delta_tilde() * delta_tilde(); }
  double phi() const { return std::arg(detuning_product()); }

  void validate() const;
};

// Composite space ordering: qutrit-major, battery-minor, qutrit basis
// (g, h, e). index(i, n) = i * battery_dim + n.
inline constexpr int kQutritG = 0;
inline constexpr int kQutritH = 1;
inline constexpr int kQutritE = 2;

inline int composite_index(int qutrit_level, int battery_level,
                           int battery_dim) {
  return qutrit_level * battery_dim + battery_level;
}

// A^dag: entries A_n at (n+1, n).
ComplexMatrix ladder_raising_operator(const BatteryModel& b);

// Rotating-frame Hamiltonian on the 3*dim composite space.
ComplexMatrix composite_hamiltonian(const BatteryModel& b,
                                    const ChargerParams& c);

// Qutrit jump operators sqrt(gamma_ij) |j><i| (x) I. Zero-rate operators
// are omitted.
std::vector<ComplexMatrix> jump_operators(const BatteryModel& b,
                                          const ChargerParams& c);

}  // namespace qbat
