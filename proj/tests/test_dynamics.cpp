#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "qbat/dynamics.hpp"
#include "qbat/observables.hpp"
#include "qbat/protocol.hpp"

using namespace qbat;

namespace {

std::mt19937 rng(24680);

ComplexMatrix random_matrix(int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m(i, j) = Complex(u(rng), u(rng));
  }
  return m;
}

ComplexMatrix random_density(int d) {
  ComplexMatrix g = random_matrix(d);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

ChargerParams fig2_charger(double omega_over_gamma_hg = 0.05) {
  ChargerParams c;
  c.Delta = 0.1;
  c.delta = 0.01;
  c.gamma_hg = 0.1;
  c.gamma_eg = 0.01;
  c.gamma_he = 0.0;
  c.Omega = omega_over_gamma_hg * c.gamma_hg;
  c.g = std::sqrt(std::abs(c.detuning_product()));  // uniform-ladder optimum
  return c;
}

bool throws_with(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const std::exception& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("lindblad_rhs fixed cases") {
  LindbladGenerator empty;
  empty.hamiltonian = ComplexMatrix::Zero(3, 3);
  const ComplexMatrix rho = random_density(3);
  CHECK(lindblad_rhs(empty, rho).norm() == 0.0);

  // Single decay channel sqrt(gamma)|g><e| acting on |e><e|.
  const double gamma = 0.37;
  LindbladGenerator decay;
  decay.hamiltonian = ComplexMatrix::Zero(2, 2);
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  l(0, 1) = std::sqrt(gamma);
  decay.jumps.push_back(l);
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const ComplexMatrix out = lindblad_rhs(decay, excited);
  CHECK(std::abs(out(0, 0) - Complex(gamma)) < 1e-15);
  CHECK(std::abs(out(1, 1) + Complex(gamma)) < 1e-15);
  CHECK(std::abs(out(0, 1)) + std::abs(out(1, 0)) < 1e-15);
}

TEST_CASE("lindblad_rhs is traceless and Hermiticity-preserving") {
  for (int rep = 0; rep < 20; ++rep) {
    LindbladGenerator gen;
    ComplexMatrix h = random_matrix(4);
    gen.hamiltonian = 0.5 * (h + h.adjoint());
    gen.jumps = {random_matrix(4), random_matrix(4)};
    const ComplexMatrix rho = random_density(4);
    const ComplexMatrix out = lindblad_rhs(gen, rho);
    CHECK(std::abs(out.trace()) < 1e-12);
    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("effective generator coefficients at the optimum") {
  const auto b = BatteryModel::uniform_ladder(50, 1.0);
  const ChargerParams c = fig2_charger();
  const LindbladGenerator gen = effective_battery_generator(b, c);
  REQUIRE(gen.jumps.size() == 2);
  const ComplexMatrix& raising = gen.jumps[1];

  // |raising coefficient|^2 = optimized rate = 2.5e-4 E_B at Omega = 0.05
  // gamma_hg (independently evaluated from gamma_eg Omega^2 / (4 |dd|
  // sin^2(phi/2)) with dd = (0.1-0.05i)(0.01-0.005i)).
  for (int n = 0; n + 1 < b.dim; ++n) {
    CHECK(std::norm(raising(n + 1, n)) == doctest::Approx(2.5e-4).epsilon(1e-9));
  }

  // Uniform ladder: n-independent coefficients on both jumps.
  const ComplexMatrix& dephasing = gen.jumps[0];
  for (int n = 1; n < b.dim - 1; ++n) {
    CHECK(std::abs(dephasing(n, n) - dephasing(0, 0)) < 1e-15);
    CHECK(std::abs(raising(n + 1, n) - raising(1, 0)) < 1e-15);
  }
  // Top-level dephasing entry reduces to sqrt(gamma_hg) Omega / Delta~.
  const Complex top_expected =
      std::sqrt(c.gamma_hg) * c.Omega / c.Delta_tilde();
  CHECK(std::abs(dephasing(b.dim - 1, b.dim - 1) - top_expected) < 1e-15);
  // And the top Hamiltonian entry to -Omega^2 Re(1/Delta~).
  CHECK(std::real(gen.hamiltonian(b.dim - 1, b.dim - 1)) ==
        doctest::Approx(-c.Omega * c.Omega * std::real(1.0 / c.Delta_tilde())));
}

TEST_CASE("effective generator: g = 0 freezes the populations") {
  const auto b = BatteryModel::uniform_ladder(5, 1.0);
  ChargerParams c = fig2_charger();
  c.g = 0.0;
  const LindbladGenerator gen = effective_battery_generator(b, c);
  REQUIRE(gen.jumps.size() == 1);  // the raising jump is identically zero

  const std::vector<double> grid = {0.0, 1e4, 1e5};
  Trajectory traj = propagate(gen, thermal_state(b, 1.0), grid);
  annotate_observables(traj, b);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK((traj.populations[i] - traj.populations[0]).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("effective generator rejects a resonant subspace") {
  const auto b = BatteryModel::uniform_ladder(3, 1.0);
  ChargerParams c;
  c.Delta = 0.1;
  c.delta = 0.01;   // no decay: detuning product real and positive
  c.Omega = 0.001;
  c.g = std::sqrt(0.1 * 0.01);
  CHECK(throws_with([&] { effective_battery_generator(b, c); },
                    "resonant denominator in subspace n=0"));
}

TEST_CASE("propagate: single-point grid returns the initial state") {
  const auto b = BatteryModel::uniform_ladder(4, 1.0);
  const LindbladGenerator gen = effective_battery_generator(b, fig2_charger());
  const std::vector<double> grid = {0.0};
  Trajectory traj =
      propagate(gen, DensityMatrix::level_projector(b.dim, 0), grid);
  REQUIRE(traj.size() == 1);
  REQUIRE(traj.populations.size() == 1);  // classical fast path
  CHECK(traj.populations[0][0] == doctest::Approx(1.0));
}

TEST_CASE("propagate: diagonal initial state stays diagonal on the dense path") {
  const auto b = BatteryModel::uniform_ladder(6, 1.0);
  const LindbladGenerator gen = effective_battery_generator(b, fig2_charger());
  PropagateOptions opt;
  opt.allow_population_fast_path = false;
  const std::vector<double> grid = {0.0, 2e3, 2e4};
  Trajectory traj =
      propagate(gen, DensityMatrix::level_projector(b.dim, 0), grid, opt);
  REQUIRE(traj.states.size() == 3);
  for (const auto& s : traj.states) {
    ComplexMatrix off = s;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("propagate: classical fast path matches the dense path") {
  const auto b = BatteryModel::truncated_ho(8, 1.0);
  const LindbladGenerator gen = effective_battery_generator(b, fig2_charger());
  const std::vector<double> grid = {0.0, 1e3, 5e3, 2e4};
  const DensityMatrix rho0 = thermal_state(b, 2.0);

  Trajectory fast = propagate(gen, rho0, grid);
  REQUIRE(fast.states.empty());

  PropagateOptions dense;
  dense.allow_population_fast_path = false;
  Trajectory slow = propagate(gen, rho0, grid, dense);
  REQUIRE(slow.states.size() == grid.size());

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const RealVector dense_pops = slow.states[i].diagonal().real();
    CHECK((fast.populations[i] - dense_pops).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("effective chain reaches the top level from the ground state") {
  const auto b = BatteryModel::uniform_ladder(6, 1.0);
  const ChargerParams c = fig2_charger();
  const LindbladGenerator gen = effective_battery_generator(b, c);
  // Rate 2.5e-4: by gamma_eg * t = 1e3 (t = 1e5) the six-step chain is done.
  const std::vector<double> grid = {0.0, 1e5, 4e5};
  Trajectory traj = propagate(gen, DensityMatrix::level_projector(b.dim, 0), grid);
  CHECK(traj.populations.back()[b.dim - 1] >= 0.999);
}

TEST_CASE("unidirectionality: cumulative tail populations never decrease") {
  const auto b = BatteryModel::large_spin(5, 1.0);
  const ChargerParams c = fig2_charger();
  ChargerParams cc = c;
  cc.g = optimal_coupling(b, cc, b.dim / 2);
  const LindbladGenerator gen = effective_battery_generator(b, cc);
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(i * 2.5e3);
  Trajectory traj = propagate(gen, thermal_state(b, 1.0), grid);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    for (int k = 0; k < b.dim; ++k) {
      const double before = traj.populations[i - 1].tail(b.dim - k).sum();
      const double after = traj.populations[i].tail(b.dim - k).sum();
      CHECK(after >= before - 1e-8);
    }
  }
}

TEST_CASE("effective steady state is the top projector for all models") {
  for (const auto& b :
       {BatteryModel::uniform_ladder(5, 1.0), BatteryModel::large_spin(2.5, 1.0),
        BatteryModel::truncated_ho(5, 1.0)}) {
    ChargerParams c = fig2_charger();
    c.g = optimal_coupling(b, c, 0);
    const LindbladGenerator gen = effective_battery_generator(b, c);
    RealVector mixed = RealVector::Constant(b.dim, 1.0 / b.dim);
    const std::vector<double> grid = {0.0, 2e6};
    Trajectory traj =
        propagate(gen, DensityMatrix::from_populations(mixed), grid);
    CHECK(traj.populations.back()[b.dim - 1] >= 0.9999);
  }
}

TEST_CASE("CompositeRhs matches the dense master-equation right-hand side") {
  for (const auto& b :
       {BatteryModel::uniform_ladder(3, 1.0), BatteryModel::large_spin(1.5, 1.0),
        BatteryModel::truncated_ho(4, 1.0)}) {
    ChargerParams c;
    c.Delta = 0.13;
    c.delta = 0.021;
    c.Omega = 0.045;
    c.gamma_hg = 0.09;
    c.gamma_eg = 0.011;
    c.gamma_he = 0.004;
    c.g = 0.03;
    const CompositeRhs fast(b, c);
    const LindbladGenerator gen = composite_generator(b, c);
    for (int rep = 0; rep < 5; ++rep) {
      const ComplexMatrix rho = random_density(3 * b.dim);
      ComplexMatrix out;
      fast(0.0, rho, out);
      const ComplexMatrix reference = lindblad_rhs(gen, rho);
      CHECK((out - reference).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("partial trace contracts the qutrit index") {
  const int d = 4;
  const ComplexMatrix qutrit = random_density(3);
  const ComplexMatrix battery = random_density(d);
  ComplexMatrix product = ComplexMatrix::Zero(3 * d, 3 * d);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      product.block(i * d, j * d, d, d) = qutrit(i, j) * battery;
    }
  }
  CHECK((partial_trace_battery(product, d) - battery).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(qutrit_level_population(product, d, kQutritG) ==
        doctest::Approx(std::real(qutrit(0, 0))));
}

TEST_CASE("composite propagation: invariants and weak-driving ground "
          "dominance on a short run") {
  const auto b = BatteryModel::uniform_ladder(3, 1.0);
  const ChargerParams c = fig2_charger();
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i * 250.0);
  Trajectory traj = propagate_composite(
      b, c, DensityMatrix::level_projector(b.dim, 0), grid);
  annotate_observables(traj, b);
  REQUIRE(traj.qutrit_ground_population.size() == grid.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(traj.qutrit_ground_population[i] >= 0.9);
    // Battery reduced state stays a valid density matrix.
    DensityMatrix s{traj.states[i]};
    CHECK_NOTHROW(s.validate());
  }
  CHECK(traj.stored_energy.back() > traj.stored_energy.front());
}

TEST_CASE("composite and effective dynamics agree at weak driving") {
  const auto b = BatteryModel::uniform_ladder(4, 1.0);
  ChargerParams c = fig2_charger(0.02);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i * 2.5e4);
  Trajectory full = propagate_composite(
      b, c, DensityMatrix::level_projector(b.dim, 0), grid);
  annotate_observables(full, b);
  Trajectory eff = propagate(effective_battery_generator(b, c),
                             DensityMatrix::level_projector(b.dim, 0), grid);
  annotate_observables(eff, b);
  const double scale = (b.dim - 1) * b.energy_quantum;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(full.stored_energy[i] - eff.stored_energy[i]) / scale <
          0.05);
  }
}

TEST_CASE("density matrix validation catches drift") {
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK(throws_with([&] { DensityMatrix{bad_trace}.validate(); }, "trace"));

  ComplexMatrix not_hermitian(2, 2);
  not_hermitian << 0.5, 0.1, 0.0, 0.5;
  CHECK(throws_with([&] { DensityMatrix{not_hermitian}.validate(); },
                    "Hermiticity"));

  ComplexMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  CHECK(throws_with([&] { DensityMatrix{negative}.validate(); }, "negative"));
}
