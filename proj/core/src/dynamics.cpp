#include "qbat/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <sstream>

#include "qbat/integrate.hpp"

namespace qbat {

namespace {

constexpr Complex kImag(0.0, 1.0);

std::string with_time(const std::string& context, double t) {
  std::ostringstream msg;
  msg << context << " at t=" << t;
  return msg.str();
}

// The master-equation derivative of a Hermitian state is Hermitian
// analytically; writing it in that form keeps the propagated state exactly
// Hermitian (rounding commutes with conjugation), so no asymmetry can
// random-walk along the generator's stationary mode on long runs.
void hermitize_in_place(ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    m(j, j) = Complex(std::real(m(j, j)), 0.0);
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
}

}  // namespace

void DensityMatrix::validate(const std::string& context) const {
  require_finite(rho, context.c_str());
  if (rho.rows() != rho.cols()) {
    throw NumericError(context + ": not square");
  }
  const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_err > defaults::density_trace_tol) {
    std::ostringstream msg;
    msg << context << ": trace deviates from 1 by " << trace_err;
    throw NumericError(msg.str());
  }
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > defaults::density_hermiticity_tol) {
    std::ostringstream msg;
    msg << context << ": Hermiticity violated by " << asym;
    throw NumericError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -defaults::density_negativity_tol) {
    std::ostringstream msg;
    msg << context << ": negative eigenvalue " << min_eig;
    throw NumericError(msg.str());
  }
}

DensityMatrix DensityMatrix::level_projector(int dim, int level) {
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(level, level) = 1.0;
  return {std::move(rho)};
}

DensityMatrix DensityMatrix::from_populations(const RealVector& populations) {
  ComplexMatrix rho = ComplexMatrix::Zero(populations.size(), populations.size());
  for (Eigen::Index n = 0; n < populations.size(); ++n) {
    rho(n, n) = populations[n];
  }
  return {std::move(rho)};
}

void LindbladGenerator::validate() const {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw NumericError("generator: Hamiltonian not square");
  }
  require_finite(hamiltonian, "generator Hamiltonian");
  const double scale = std::max(hamiltonian.norm(), 1e-300);
  const double asym = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (asym > defaults::hermiticity_rel_tol * std::max(scale, 1.0)) {
    std::ostringstream msg;
    msg << "generator: Hamiltonian not Hermitian, asymmetry " << asym;
    throw NumericError(msg.str());
  }
  for (const auto& l : jumps) {
    if (l.rows() != hamiltonian.rows() || l.cols() != hamiltonian.cols()) {
      throw NumericError("generator: jump dimension mismatch");
    }
    require_finite(l, "generator jump");
  }
}

ComplexMatrix lindblad_rhs(const LindbladGenerator& gen,
                           const ComplexMatrix& rho) {
  if (rho.rows() != gen.hamiltonian.rows() ||
      rho.cols() != gen.hamiltonian.cols()) {
    throw NumericError("lindblad_rhs: state dimension mismatch");
  }
  ComplexMatrix out =
      -kImag * (gen.hamiltonian * rho - rho * gen.hamiltonian);
  for (const auto& l : gen.jumps) {
    const ComplexMatrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

LindbladGenerator effective_battery_generator(const BatteryModel& b,
                                              const ChargerParams& c) {
  b.validate();
  c.validate();
  const int d = b.dim;
  const Complex dd = c.detuning_product();
  const Complex dt = c.delta_tilde();
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  ComplexMatrix dephasing = ComplexMatrix::Zero(d, d);
  ComplexMatrix raising = ComplexMatrix::Zero(d, d);
  const double sqrt_hg = std::sqrt(c.gamma_hg);
  const double sqrt_eg = std::sqrt(c.gamma_eg);
  for (int n = 0; n < d; ++n) {
    const double a = (n + 1 < d) ? b.ladder_coeffs[n] : 0.0;  // A_top = 0
    const Complex den = dd - c.g * c.g * a * a;
    if (std::abs(den) <= defaults::resonance_rel_tol * std::abs(dd) ||
        den == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "effective generator: resonant denominator in subspace n=" << n
          << " (|den|=" << std::abs(den) << ")";
      throw NumericError(msg.str());
    }
    h(n, n) = -c.Omega * c.Omega * std::real(dt / den);
    dephasing(n, n) = sqrt_hg * c.Omega * dt / den;
    if (n + 1 < d) {
      raising(n + 1, n) = sqrt_eg * c.Omega * c.g * a / (-den);
    }
  }
  LindbladGenerator gen;
  gen.hamiltonian = std::move(h);
  if (c.gamma_hg > 0.0 && c.Omega > 0.0) gen.jumps.push_back(std::move(dephasing));
  if (c.gamma_eg > 0.0 && c.Omega > 0.0 && c.g > 0.0) {
    gen.jumps.push_back(std::move(raising));
  }
  return gen;
}

LindbladGenerator composite_generator(const BatteryModel& b,
                                      const ChargerParams& c) {
  return {composite_hamiltonian(b, c), jump_operators(b, c)};
}

ComplexMatrix partial_trace_battery(const ComplexMatrix& rho_composite,
                                    int battery_dim) {
  if (rho_composite.rows() != 3 * battery_dim ||
      rho_composite.cols() != 3 * battery_dim) {
    throw NumericError("partial_trace_battery: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(battery_dim, battery_dim);
  for (int i = 0; i < 3; ++i) {
    out += rho_composite.block(i * battery_dim, i * battery_dim, battery_dim,
                               battery_dim);
  }
  return out;
}

double qutrit_level_population(const ComplexMatrix& rho_composite,
                               int battery_dim, int qutrit_level) {
  return rho_composite
      .block(qutrit_level * battery_dim, qutrit_level * battery_dim,
             battery_dim, battery_dim)
      .real()
      .trace();
}

CompositeRhs::CompositeRhs(const BatteryModel& b, const ChargerParams& c)
    : battery_dim_(b.dim),
      coeffs_(b.ladder_coeffs),
      omega_(c.Omega),
      g_(c.g),
      gamma_hg_(c.gamma_hg),
      gamma_eg_(c.gamma_eg),
      gamma_he_(c.gamma_he),
      detuning_h_(c.Delta_tilde()),
      detuning_e_(c.delta_tilde()) {}

void CompositeRhs::operator()(double, const ComplexMatrix& rho,
                              ComplexMatrix& out) const {
  const int d = battery_dim_;
  const int dim = 3 * d;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw NumericError("CompositeRhs: state dimension mismatch");
  }
  out.resize(dim, dim);

  // -i K rho with K = H - (i/2) sum L^dag L; the complex detunings carry the
  // anti-Hermitian part. Assembled by qutrit row blocks (g, h, e).
  out.middleRows(0, d) = (-kImag * omega_) * rho.middleRows(d, d);
  out.middleRows(d, d) = (-kImag * omega_) * rho.middleRows(0, d) +
                         (-kImag * detuning_h_) * rho.middleRows(d, d);
  out.middleRows(2 * d, d) = (-kImag * detuning_e_) * rho.middleRows(2 * d, d);
  if (g_ != 0.0) {
    for (int n = 0; n + 1 < d; ++n) {
      const Complex v = -kImag * (g_ * coeffs_[n]);
      out.row(d + n) += v * rho.row(2 * d + n + 1);      // g A acting on e rows
      out.row(2 * d + n + 1) += v * rho.row(d + n);      // g A^dag on h rows
    }
  }

  // +i rho K^dag, by qutrit column blocks.
  out.middleCols(0, d) += (kImag * omega_) * rho.middleCols(d, d);
  out.middleCols(d, d) += (kImag * omega_) * rho.middleCols(0, d) +
                          (kImag * std::conj(detuning_h_)) * rho.middleCols(d, d);
  out.middleCols(2 * d, d) +=
      (kImag * std::conj(detuning_e_)) * rho.middleCols(2 * d, d);
  if (g_ != 0.0) {
    for (int n = 0; n + 1 < d; ++n) {
      const Complex v = kImag * (g_ * coeffs_[n]);
      out.col(d + n) += v * rho.col(2 * d + n + 1);
      out.col(2 * d + n + 1) += v * rho.col(d + n);
    }
  }

  // Jump refilling terms L rho L^dag.
  if (gamma_hg_ != 0.0) {
    out.block(0, 0, d, d) += gamma_hg_ * rho.block(d, d, d, d);
  }
  if (gamma_eg_ != 0.0) {
    out.block(0, 0, d, d) += gamma_eg_ * rho.block(2 * d, 2 * d, d, d);
  }
  if (gamma_he_ != 0.0) {
    out.block(2 * d, 2 * d, d, d) += gamma_he_ * rho.block(d, d, d, d);
  }

  hermitize_in_place(out);
}

namespace {

bool exactly_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

bool nearly_diagonal(const ComplexMatrix& m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

// Classical rate matrix W with dot p = W p, valid when the generator maps
// diagonal states to diagonal states: diagonal H, each jump with at most one
// nonzero per column, and diagonal L^dag L.
std::optional<Eigen::MatrixXd> classical_rate_matrix(
    const LindbladGenerator& gen) {
  if (!exactly_diagonal(gen.hamiltonian)) return std::nullopt;
  const int d = gen.dim();
  Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(d, d);
  for (const auto& l : gen.jumps) {
    for (int col = 0; col < d; ++col) {
      int nonzeros = 0;
      for (int row = 0; row < d; ++row) {
        if (l(row, col) != Complex(0.0, 0.0)) ++nonzeros;
      }
      if (nonzeros > 1) return std::nullopt;
    }
    if (!exactly_diagonal(ComplexMatrix(l.adjoint() * l))) return std::nullopt;
    gain += l.cwiseAbs2();
  }
  Eigen::MatrixXd w = gain;
  for (int col = 0; col < d; ++col) {
    w(col, col) -= gain.col(col).sum();
  }
  return w;
}

Trajectory propagate_populations(const Eigen::MatrixXd& w,
                                 const RealVector& p0,
                                 std::span<const double> t_grid,
                                 OdeTolerances tol) {
  Trajectory traj;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.populations.reserve(t_grid.size());
  auto rhs = [&w](double, const RealVector& p, RealVector& dp) {
    dp.noalias() = w * p;
  };
  integrate_ode_observe(rhs, p0, t_grid, tol, [&](double t, const RealVector& p) {
    const double sum_err = std::abs(p.sum() - 1.0);
    if (sum_err > defaults::density_trace_tol) {
      throw NumericError(with_time("propagate: population sum drift " +
                                       std::to_string(sum_err),
                                   t));
    }
    if (p.minCoeff() < -defaults::density_negativity_tol) {
      throw NumericError(with_time("propagate: negative population", t));
    }
    traj.populations.push_back(p);
  });
  return traj;
}

// Dense right-hand side with precomputed K = H - (i/2) sum L^dag L.
class DenseRhs {
 public:
  explicit DenseRhs(const LindbladGenerator& gen) {
    k_ = gen.hamiltonian;
    for (const auto& l : gen.jumps) {
      k_ -= 0.5 * kImag * (l.adjoint() * l);
      jumps_.push_back(l);
      jump_adjs_.push_back(l.adjoint());
    }
    k_adj_ = k_.adjoint();
    const int d = gen.dim();
    t1_.resize(d, d);
    t2_.resize(d, d);
  }

  void operator()(double, const ComplexMatrix& y, ComplexMatrix& out) const {
    t1_.noalias() = k_ * y;
    t2_.noalias() = y * k_adj_;
    out = -kImag * (t1_ - t2_);
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      t1_.noalias() = jumps_[i] * y;
      out.noalias() += t1_ * jump_adjs_[i];
    }
    hermitize_in_place(out);
  }

 private:
  ComplexMatrix k_, k_adj_;
  std::vector<ComplexMatrix> jumps_, jump_adjs_;
  mutable ComplexMatrix t1_, t2_;
};

}  // namespace

Trajectory propagate(const LindbladGenerator& gen, const DensityMatrix& rho0,
                     std::span<const double> t_grid,
                     const PropagateOptions& options) {
  gen.validate();
  rho0.validate("propagate: initial state");
  if (rho0.dim() != gen.dim()) {
    throw NumericError("propagate: state/generator dimension mismatch");
  }

  if (options.allow_population_fast_path &&
      nearly_diagonal(rho0.rho, 1e-13)) {
    if (auto w = classical_rate_matrix(gen)) {
      return propagate_populations(*w, rho0.rho.diagonal().real(), t_grid,
                                   options.tol);
    }
  }

  DenseRhs rhs(gen);
  Trajectory traj;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.states.reserve(t_grid.size());
  integrate_ode_observe(
      rhs, rho0.rho, t_grid, options.tol,
      [&](double t, const ComplexMatrix& y) {
        DensityMatrix state{y};
        state.validate(with_time("propagate: state", t));
        traj.states.push_back(std::move(state.rho));
      });
  return traj;
}

Trajectory propagate_composite(const BatteryModel& b, const ChargerParams& c,
                               const DensityMatrix& rho_b0,
                               std::span<const double> t_grid,
                               OdeTolerances tol) {
  if (rho_b0.dim() != b.dim) {
    throw NumericError("propagate_composite: battery dimension mismatch");
  }
  rho_b0.validate("propagate_composite: initial battery state");
  const int d = b.dim;
  ComplexMatrix rho0 = ComplexMatrix::Zero(3 * d, 3 * d);
  rho0.block(kQutritG * d, kQutritG * d, d, d) = rho_b0.rho;
  return propagate_composite_state(b, c, DensityMatrix{std::move(rho0)},
                                   t_grid, tol);
}

Trajectory propagate_composite_state(const BatteryModel& b,
                                     const ChargerParams& c,
                                     const DensityMatrix& rho_composite0,
                                     std::span<const double> t_grid,
                                     OdeTolerances tol,
                                     ComplexMatrix* final_state) {
  b.validate();
  c.validate();
  const int d = b.dim;
  if (rho_composite0.dim() != 3 * d) {
    throw NumericError("propagate_composite: composite dimension mismatch");
  }
  rho_composite0.validate("propagate_composite: initial state");

  CompositeRhs rhs(b, c);
  Trajectory traj;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.states.reserve(t_grid.size());
  traj.qutrit_ground_population.reserve(t_grid.size());
  integrate_ode_observe(
      rhs, rho_composite0.rho, t_grid, tol,
      [&](double t, const ComplexMatrix& y) {
        DensityMatrix full{y};
        full.validate(with_time("propagate_composite: state", t));
        traj.states.push_back(partial_trace_battery(y, d));
        traj.qutrit_ground_population.push_back(
            qutrit_level_population(y, d, kQutritG));
        if (final_state != nullptr && t == traj.times.back()) *final_state = y;
      });
  return traj;
}

}  // namespace qbat
