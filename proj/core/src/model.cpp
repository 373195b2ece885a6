#include "qbat/model.hpp"

#include <cmath>
#include <sstream>

namespace qbat {

std::string to_string(BatteryKind kind) {
  switch (kind) {
    case BatteryKind::UniformLadder: return "uniform";
    case BatteryKind::LargeSpin: return "spin";
    case BatteryKind::TruncatedHO: return "ho";
  }
  return "?";
}

BatteryModel BatteryModel::uniform_ladder(int levels_above_ground, double e_b) {
  if (levels_above_ground < 1) {
    throw ConfigError("uniform_ladder: need at least one level above ground");
  }
  BatteryModel b;
  b.kind = BatteryKind::UniformLadder;
  b.dim = levels_above_ground + 1;
  b.energy_quantum = e_b;
  for (int n = 0; n < b.dim; ++n) b.level_energies.push_back(e_b * n);
  b.ladder_coeffs.assign(static_cast<std::size_t>(b.dim) - 1, 1.0);
  b.validate();
  return b;
}

BatteryModel BatteryModel::large_spin(double j, double e_b) {
  const double two_j = 2.0 * j;
  if (!(j > 0.0) || std::abs(two_j - std::round(two_j)) > 1e-9) {
    throw ConfigError("large_spin: j must be a positive integer or half-integer");
  }
  BatteryModel b;
  b.kind = BatteryKind::LargeSpin;
  b.dim = static_cast<int>(std::round(two_j)) + 1;
  b.energy_quantum = e_b;
  for (int n = 0; n < b.dim; ++n) {
    const double m = n - j;
    b.level_energies.push_back(e_b * m);
  }
  for (int n = 0; n + 1 < b.dim; ++n) {
    const double m = n - j;
    b.ladder_coeffs.push_back(std::sqrt(j * (j + 1.0) - m * (m + 1.0)));
  }
  b.validate();
  return b;
}

BatteryModel BatteryModel::truncated_ho(int levels_above_ground, double e_b) {
  if (levels_above_ground < 1) {
    throw ConfigError("truncated_ho: need at least one level above ground");
  }
  BatteryModel b;
  b.kind = BatteryKind::TruncatedHO;
  b.dim = levels_above_ground + 1;
  b.energy_quantum = e_b;
  for (int n = 0; n < b.dim; ++n) b.level_energies.push_back(e_b * n);
  for (int n = 0; n + 1 < b.dim; ++n) b.ladder_coeffs.push_back(std::sqrt(n + 1.0));
  b.validate();
  return b;
}

ComplexMatrix BatteryModel::hamiltonian() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h(n, n) = level_energies[n];
  return h;
}

void BatteryModel::validate() const {
  if (dim < 2) throw ConfigError("battery: dim must be at least 2");
  if (!(energy_quantum > 0.0)) {
    throw ConfigError("battery: energy quantum must be positive");
  }
  if (static_cast<int>(level_energies.size()) != dim) {
    throw ConfigError("battery: level energy count must equal dim");
  }
  if (static_cast<int>(ladder_coeffs.size()) != dim - 1) {
    throw ConfigError("battery: need dim-1 ladder coefficients");
  }
  for (int n = 0; n + 1 < dim; ++n) {
    if (!(level_energies[n + 1] > level_energies[n])) {
      throw ConfigError("battery: level energies must be ascending");
    }
    if (!(ladder_coeffs[n] > 0.0)) {
      throw ConfigError("battery: ladder coefficients must be strictly positive");
    }
  }
}

void ChargerParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "charger." << name << ": must be finite and nonnegative";
      throw ConfigError(msg.str());
    }
  };
  nonneg(gamma_hg, "gamma_hg");
  nonneg(gamma_eg, "gamma_eg");
  nonneg(gamma_he, "gamma_he");
  nonneg(Omega, "Omega");
  nonneg(g, "g");
  if (!std::isfinite(Delta) || !std::isfinite(delta)) {
    throw ConfigError("charger: detunings must be finite");
  }
}

ComplexMatrix ladder_raising_operator(const BatteryModel& b) {
  ComplexMatrix a = ComplexMatrix::Zero(b.dim, b.dim);
  for (int n = 0; n + 1 < b.dim; ++n) a(n + 1, n) = b.ladder_coeffs[n];
  return a;
}

ComplexMatrix composite_hamiltonian(const BatteryModel& b,
                                    const ChargerParams& c) {
  const int d = b.dim;
  ComplexMatrix h = ComplexMatrix::Zero(3 * d, 3 * d);
  for (int n = 0; n < d; ++n) {
    h(composite_index(kQutritH, n, d), composite_index(kQutritH, n, d)) = c.Delta;
    h(composite_index(kQutritE, n, d), composite_index(kQutritE, n, d)) = c.delta;
    h(composite_index(kQutritH, n, d), composite_index(kQutritG, n, d)) = c.Omega;
    h(composite_index(kQutritG, n, d), composite_index(kQutritH, n, d)) = c.Omega;
  }
  for (int n = 0; n + 1 < d; ++n) {
    // g (|e><h| (x) A^dag + h.c.)
    const double v = c.g * b.ladder_coeffs[n];
    h(composite_index(kQutritE, n + 1, d), composite_index(kQutritH, n, d)) = v;
    h(composite_index(kQutritH, n, d), composite_index(kQutritE, n + 1, d)) = v;
  }
  return h;
}

std::vector<ComplexMatrix> jump_operators(const BatteryModel& b,
                                          const ChargerParams& c) {
  const int d = b.dim;
  std::vector<ComplexMatrix> jumps;
  auto add = [&](double rate, int from, int to) {
    if (rate <= 0.0) return;
    ComplexMatrix l = ComplexMatrix::Zero(3 * d, 3 * d);
    const double amp = std::sqrt(rate);
    for (int n = 0; n < d; ++n) {
      l(composite_index(to, n, d), composite_index(from, n, d)) = amp;
    }
    jumps.push_back(std::move(l));
  };
  add(c.gamma_hg, kQutritH, kQutritG);
  add(c.gamma_eg, kQutritE, kQutritG);
  add(c.gamma_he, kQutritH, kQutritE);
  return jumps;
}

}  // namespace qbat
