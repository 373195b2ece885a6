#pragma once

#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"
#include "qbat/numerics.hpp"

namespace qbat {

// One four-level subspace {|g n>, |h n>, |e n+1>, |g n+1>} reduced to its
// rapidly decaying excited pair {|h n>, |e n+1>} (just {|h top>} for the
// uppermost subspace). The excited Hamiltonian carries the complex detunings
// on the diagonal and g A_n off it; the drive vector and jump rows are the
// restrictions of the drive and the qutrit jumps to this basis.
struct SubspaceSystem {
  int n = 0;
  ComplexMatrix excited_hamiltonian;  // 2x2, or 1x1 at the top
  ComplexVector drive_vector;         // (Omega, 0) / (Omega)
  ComplexVector l_hg_row;             // (sqrt(gamma_hg), 0)
  ComplexVector l_eg_row;             // (0, sqrt(gamma_eg)); zero at top
  ComplexVector l_he_row;             // (sqrt(gamma_he), 0)
};

SubspaceSystem make_subspace(const BatteryModel& b, const ChargerParams& c,
                             int n);

// Effective operators of one subspace, computed through resolvent solves
// L (H~)^{-1} V and -V^dag (H~)^{-1} V rather than the closed formulas the
// dynamics module uses; the two routes are compared in tests.
struct SubspaceEffectiveOperators {
  Complex resolvent_hamiltonian;  // -V^dag H~^{-1} V, non-Hermitian shift
  double h_eff;                   // its real part: the Hamiltonian coefficient
  Complex l_hg;                   // dephasing coefficient on |g n>
  Complex l_eg;                   // raising coefficient |g n> -> |g n+1>
  Complex l_he;                   // leakage coefficient |g n> -> |e n>
};

SubspaceEffectiveOperators effective_operators_subspace(
    const SubspaceSystem& s);

// Effective coupling of order l (>= 1) from the constrained golden-rule sum
// over intermediate excited states, evaluated by explicit path enumeration.
// Odd orders connect |g n> to |h n>, even orders to |e n+1>.
Complex fgr_effective_coupling(const SubspaceSystem& s, int order);

// Partial sums of the golden-rule series against the closed-form resolvent
// coefficients. Requires convergence ratio |g^2 A_n^2 / (Delta~ delta~)|
// below fgr_ratio_limit.
struct FgrSeriesCheck {
  double ratio = 0.0;
  std::vector<Complex> partial_hg;  // sqrt(gamma_hg)/Delta~ * sum of odd orders
  std::vector<Complex> partial_eg;  // sqrt(gamma_eg)/delta~ * sum of even orders
  Complex closed_hg;
  Complex closed_eg;
  double residual_hg = 0.0;
  double residual_eg = 0.0;
};

FgrSeriesCheck fgr_series_check(const SubspaceSystem& s, int order_max);

// Column-stacked superoperator: d^2 x d^2 matrix with
// vec(rho_dot) = L vec(rho). Dense; dimension capped at
// defaults::vectorized_dim_limit.
ComplexMatrix vectorized_generator(const LindbladGenerator& gen);

// Size of the gamma_he-induced discharging channels relative to the
// charging-side rates, from the Kronecker-sum resolvent of the (n-1)th
// excited pair. Both are real magnitudes; both vanish with gamma_he.
struct DischargingRatios {
  double dephasing_ratio = 0.0;
  double decay_ratio = 0.0;
};

DischargingRatios discharging_ratios(const BatteryModel& b,
                                     const ChargerParams& c, int n);

}  // namespace qbat
