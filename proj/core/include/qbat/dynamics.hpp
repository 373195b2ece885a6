#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbat/model.hpp"
#include "qbat/numerics.hpp"

namespace qbat {

// Trace-one Hermitian positive-semidefinite state.
struct DensityMatrix {
  ComplexMatrix rho;

  int dim() const { return static_cast<int>(rho.rows()); }
  // Throws NumericError when trace, Hermiticity or positivity drift beyond
  // the density tolerances. States are never repaired; a violation aborts.
  void validate(const std::string& context = "density matrix") const;

  static DensityMatrix level_projector(int dim, int level);
  static DensityMatrix from_populations(const RealVector& populations);
};

// Hamiltonian plus jump operators; defines a master-equation right-hand side.
struct LindbladGenerator {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> jumps;

  int dim() const { return static_cast<int>(hamiltonian.rows()); }
  void validate() const;
};

// -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
// Analytically traceless and Hermiticity-preserving.
ComplexMatrix lindblad_rhs(const LindbladGenerator& gen,
                           const ComplexMatrix& rho);

// Battery-only effective generator: diagonal Hamiltonian
//   H_n = -Omega^2 Re(delta~ / (Delta~ delta~ - g^2 A_n^2)),
// a diagonal dephasing jump with entries
//   sqrt(gamma_hg) Omega delta~ / (Delta~ delta~ - g^2 A_n^2),
// and a raising jump with subdiagonal entries
//   sqrt(gamma_eg) Omega g A_n / (g^2 A_n^2 - Delta~ delta~),
// with A_top = 0. Identically zero jumps are dropped. Throws NumericError
// naming the subspace if some denominator is resonantly small.
LindbladGenerator effective_battery_generator(const BatteryModel& b,
                                              const ChargerParams& c);

// Convenience: the full composite-space generator built from the model
// operators.
LindbladGenerator composite_generator(const BatteryModel& b,
                                      const ChargerParams& c);

// Time grid plus everything sampled on it. `states` holds battery density
// matrices; population-only runs (the classical fast path) leave it empty
// and fill `populations` directly. The remaining columns are filled by
// annotate_observables().
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<RealVector> populations;
  std::vector<double> stored_energy;
  std::vector<double> ergotropy;
  std::vector<int> most_populated;
  std::vector<double> qutrit_ground_population;  // composite runs only

  std::size_t size() const { return times.size(); }
};

struct PropagateOptions {
  OdeTolerances tol{};
  // Evolve only the population vector when the generator and the initial
  // state are diagonal (the effective generator preserves diagonality).
  bool allow_population_fast_path = true;
};

// Propagates rho0 under gen to every grid time. State invariants are checked
// at each grid point and violations abort with diagnostics.
Trajectory propagate(const LindbladGenerator& gen, const DensityMatrix& rho0,
                     std::span<const double> t_grid,
                     const PropagateOptions& options = {});

// Full composite run from (qutrit ground) (x) rho_b0. The returned
// trajectory carries battery reduced states and the qutrit ground
// population per sample.
Trajectory propagate_composite(const BatteryModel& b, const ChargerParams& c,
                               const DensityMatrix& rho_b0,
                               std::span<const double> t_grid,
                               OdeTolerances tol = {});

// Same, starting from an arbitrary composite state; optionally hands back
// the final composite state (for piecewise-constant coupling runs).
Trajectory propagate_composite_state(const BatteryModel& b,
                                     const ChargerParams& c,
                                     const DensityMatrix& rho_composite0,
                                     std::span<const double> t_grid,
                                     OdeTolerances tol = {},
                                     ComplexMatrix* final_state = nullptr);

// Contraction over the qutrit index of a composite state.
ComplexMatrix partial_trace_battery(const ComplexMatrix& rho_composite,
                                    int battery_dim);

double qutrit_level_population(const ComplexMatrix& rho_composite,
                               int battery_dim, int qutrit_level);

// Structured evaluator of the composite master equation. Exploits the
// qutrit (x) battery block layout and the bidiagonal ladder operator, so one
// call costs O(dim^2) instead of the O(dim^3) of dense products. Equivalent
// to lindblad_rhs on composite_generator(b, c).
class CompositeRhs {
 public:
  CompositeRhs(const BatteryModel& b, const ChargerParams& c);

  int dim() const { return 3 * battery_dim_; }
  void operator()(double t, const ComplexMatrix& rho,
                  ComplexMatrix& out) const;

 private:
  int battery_dim_;
  std::vector<double> coeffs_;  // A_n
  double omega_, g_, gamma_hg_, gamma_eg_, gamma_he_;
  Complex detuning_h_;  // Delta~
  Complex detuning_e_;  // delta~
};

}  // namespace qbat
