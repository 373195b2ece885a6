#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qbat/observables.hpp"

using namespace qbat;

namespace {

std::mt19937 rng(1357911);

ComplexMatrix random_matrix(int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m(i, j) = Complex(u(rng), u(rng));
  }
  return m;
}

DensityMatrix random_density(int d) {
  ComplexMatrix g = random_matrix(d);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix{rho};
}

ComplexMatrix random_unitary(int d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d));
  return ComplexMatrix(qr.householderQ());
}

// Brute-force ergotropy: minimize the energy over every permutation that
// assigns the spectrum of rho to the battery levels.
double ergotropy_brute_force(const DensityMatrix& rho, const BatteryModel& b) {
  const auto eig = hermitian_eigh(rho.rho);
  std::vector<double> spectrum(eig.eigenvalues.begin(), eig.eigenvalues.end());
  std::sort(spectrum.begin(), spectrum.end());
  double energy = 0.0;
  for (int n = 0; n < b.dim; ++n) {
    energy += b.level_energies[n] * std::real(rho.rho(n, n));
  }
  double best = std::numeric_limits<double>::infinity();
  do {
    double e = 0.0;
    for (int n = 0; n < b.dim; ++n) e += b.level_energies[n] * spectrum[n];
    best = std::min(best, e);
  } while (std::next_permutation(spectrum.begin(), spectrum.end()));
  return energy - best;
}

}  // namespace

TEST_CASE("stored energy basics") {
  const auto b = BatteryModel::uniform_ladder(5, 1.0);
  const auto ground = DensityMatrix::level_projector(b.dim, 0);
  const auto top = DensityMatrix::level_projector(b.dim, b.dim - 1);
  CHECK(stored_energy(ground, ground, b) == doctest::Approx(0.0));
  CHECK(stored_energy(top, ground, b) == doctest::Approx(5.0));
  const auto th = thermal_state(b, 0.7);
  CHECK(stored_energy(th, th, b) == doctest::Approx(0.0));
}

TEST_CASE("passive state fixed cases") {
  const auto b = BatteryModel::uniform_ladder(1, 1.0);
  RealVector p(2);
  p << 0.3, 0.7;
  const auto sigma =
      passive_state(DensityMatrix::from_populations(p), b);
  CHECK(sigma.populations[0] == doctest::Approx(0.7));
  CHECK(sigma.populations[1] == doctest::Approx(0.3));

  const auto b5 = BatteryModel::uniform_ladder(4, 1.0);
  const auto top = DensityMatrix::level_projector(b5.dim, b5.dim - 1);
  const auto sig_top = passive_state(top, b5);
  CHECK(sig_top.populations[0] == doctest::Approx(1.0));

  // Already passive diagonal state: unchanged (idempotence).
  RealVector q(5);
  q << 0.4, 0.25, 0.2, 0.1, 0.05;
  const auto sig_q = passive_state(DensityMatrix::from_populations(q), b5);
  for (int n = 0; n < 5; ++n) CHECK(sig_q.populations[n] == doctest::Approx(q[n]));
  CHECK(sig_q.populations.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ergotropy fixed cases and brute-force oracle") {
  const auto b2 = BatteryModel::uniform_ladder(1, 1.0);
  RealVector p(2);
  p << 0.3, 0.7;
  CHECK(ergotropy(DensityMatrix::from_populations(p), b2) ==
        doctest::Approx(0.4));

  const auto b = BatteryModel::uniform_ladder(4, 1.0);
  CHECK(ergotropy(DensityMatrix::level_projector(b.dim, b.dim - 1), b) ==
        doctest::Approx(4.0));
  CHECK(ergotropy(thermal_state(b, 1.3), b) == doctest::Approx(0.0));
  CHECK(ergotropy(DensityMatrix::level_projector(b.dim, 0), b) ==
        doctest::Approx(0.0));

  for (const auto& model :
       {BatteryModel::uniform_ladder(4, 1.0), BatteryModel::large_spin(2, 0.8),
        BatteryModel::truncated_ho(4, 1.3)}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto rho = random_density(model.dim);
      CHECK(ergotropy(rho, model) ==
            doctest::Approx(ergotropy_brute_force(rho, model)).epsilon(1e-9));
    }
  }
}

TEST_CASE("ergotropy properties: nonnegativity, bounds, spectrum-only") {
  const auto b = BatteryModel::large_spin(3, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const auto rho = random_density(b.dim);
    const double e = ergotropy(rho, b);
    CHECK(e >= -1e-9);
    double mean_energy = 0.0;
    for (int n = 0; n < b.dim; ++n) {
      mean_energy += b.level_energies[n] * std::real(rho.rho(n, n));
    }
    CHECK(e <= mean_energy - b.level_energies.front() + 1e-9);

    // Unitary conjugation changes the mean energy, not the passive energy.
    const ComplexMatrix u = random_unitary(b.dim);
    const DensityMatrix rotated{ComplexMatrix(u * rho.rho * u.adjoint())};
    const auto sigma_a = passive_state(rho, b);
    const auto sigma_b = passive_state(rotated, b);
    CHECK((sigma_a.populations - sigma_b.populations).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("thermal states") {
  const auto b = BatteryModel::uniform_ladder(1, 1.0);
  const auto cold = thermal_state(b, std::numeric_limits<double>::infinity());
  CHECK(std::real(cold.rho(0, 0)) == doctest::Approx(1.0));

  const auto hot = thermal_state(b, 0.0);
  CHECK(std::real(hot.rho(0, 0)) == doctest::Approx(0.5));
  CHECK(std::real(hot.rho(1, 1)) == doctest::Approx(0.5));

  // Boltzmann weights by hand: p0 = 1/(1+e^-1) at beta = 1/E_B.
  const auto warm = thermal_state(b, 1.0);
  CHECK(std::real(warm.rho(0, 0)) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));

  // Large-spin thermal state: ground level m=-J carries the largest weight.
  const auto spin = BatteryModel::large_spin(25, 1.0);
  const auto ts = thermal_state(spin, 1.0);
  CHECK(std::real(ts.rho(0, 0)) > std::real(ts.rho(1, 1)));
  CHECK(std::abs(ts.rho.trace() - Complex(1.0)) < 1e-12);

  CHECK_THROWS_AS(thermal_state(b, -0.5), ConfigError);
}

TEST_CASE("most populated level and the tie rule") {
  CHECK(most_populated_level(DensityMatrix::level_projector(5, 0)) == 0);
  RealVector mixed = RealVector::Constant(4, 0.25);
  CHECK(most_populated_level(mixed) == 3);  // ties break toward the top
  RealVector p(3);
  p << 0.2, 0.5, 0.3;
  CHECK(most_populated_level(p) == 1);
}

TEST_CASE("annotate_observables rejects inconsistent populations") {
  Trajectory traj;
  traj.times = {0.0};
  RealVector bad(2);
  bad << 0.7, 0.1;
  traj.populations.push_back(bad);
  const auto b = BatteryModel::uniform_ladder(1, 1.0);
  CHECK_THROWS_AS(annotate_observables(traj, b), NumericError);
}
