#include "qbat/perturbation.hpp"

#include <cmath>
#include <sstream>

namespace qbat {

namespace {

constexpr Complex kImag(0.0, 1.0);

}  // namespace

SubspaceSystem make_subspace(const BatteryModel& b, const ChargerParams& c,
                             int n) {
  b.validate();
  c.validate();
  if (n < 0 || n >= b.dim) {
    std::ostringstream msg;
    msg << "make_subspace: n=" << n << " outside 0.." << b.dim - 1;
    throw NumericError(msg.str());
  }
  SubspaceSystem s;
  s.n = n;
  const bool top = (n == b.dim - 1);
  const int m = top ? 1 : 2;
  s.excited_hamiltonian = ComplexMatrix::Zero(m, m);
  s.excited_hamiltonian(0, 0) = c.Delta_tilde();
  if (!top) {
    s.excited_hamiltonian(1, 1) = c.delta_tilde();
    s.excited_hamiltonian(0, 1) = c.g * b.ladder_coeffs[n];
    s.excited_hamiltonian(1, 0) = c.g * b.ladder_coeffs[n];
  }
  s.drive_vector = ComplexVector::Zero(m);
  s.drive_vector(0) = c.Omega;
  s.l_hg_row = ComplexVector::Zero(m);
  s.l_hg_row(0) = std::sqrt(c.gamma_hg);
  s.l_eg_row = ComplexVector::Zero(m);
  if (!top) s.l_eg_row(1) = std::sqrt(c.gamma_eg);
  s.l_he_row = ComplexVector::Zero(m);
  s.l_he_row(0) = std::sqrt(c.gamma_he);
  return s;
}

SubspaceEffectiveOperators effective_operators_subspace(
    const SubspaceSystem& s) {
  ComplexVector x;
  try {
    x = solve_linear(s.excited_hamiltonian, s.drive_vector);
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << "effective_operators_subspace: singular excited Hamiltonian in "
           "subspace n="
        << s.n << " (" << e.what() << ")";
    throw NumericError(msg.str());
  }
  SubspaceEffectiveOperators out;
  out.resolvent_hamiltonian = -(s.drive_vector.adjoint() * x)(0);
  out.h_eff = std::real(out.resolvent_hamiltonian);
  out.l_hg = (s.l_hg_row.transpose() * x)(0);
  out.l_eg = (s.l_eg_row.transpose() * x)(0);
  out.l_he = (s.l_he_row.transpose() * x)(0);
  return out;
}

Complex fgr_effective_coupling(const SubspaceSystem& s, int order) {
  if (order < 1) {
    throw NumericError("fgr_effective_coupling: order must be >= 1");
  }
  if (order > defaults::fgr_order_limit) {
    throw NumericError("fgr_effective_coupling: order cap exceeded");
  }
  // States 0 = |g n>, 1 = |h n>, 2 = |e n+1>; the drive connects g<->h, the
  // charger-battery coupling h<->e. Excited energies from the diagonal of
  // the excited Hamiltonian; the ground reference energy is 0.
  const bool top = (s.excited_hamiltonian.rows() == 1);
  const Complex omega = s.drive_vector(0);
  const Complex ga = top ? Complex(0.0) : s.excited_hamiltonian(0, 1);
  Complex v[3][3] = {};
  v[1][0] = omega;
  v[0][1] = omega;
  v[1][2] = ga;
  v[2][1] = ga;
  Complex energy[3] = {Complex(0.0), s.excited_hamiltonian(0, 0),
                       top ? Complex(0.0) : s.excited_hamiltonian(1, 1)};
  const int final_state = (order % 2 == 1) ? 1 : 2;

  // Sum over intermediate sequences m_1..m_{order-1} drawn from the excited
  // states; each intermediate m contributes 1/(0 - E_m). Zero-amplitude
  // branches are pruned, so the walk follows the alternating chain.
  auto walk = [&](auto&& self, int current, int position) -> Complex {
    if (position == order - 1) return v[final_state][current];
    Complex acc = 0.0;
    for (int next : {1, 2}) {
      const Complex hop = v[next][current];
      if (hop == Complex(0.0)) continue;
      acc += hop / (-energy[next]) * self(self, next, position + 1);
    }
    return acc;
  };

  if (order == 1) return v[final_state][0];
  Complex total = 0.0;
  for (int first : {1, 2}) {
    const Complex hop = v[first][0];
    if (hop == Complex(0.0)) continue;
    total += hop / (-energy[first]) * walk(walk, first, 1);
  }
  return total;
}

FgrSeriesCheck fgr_series_check(const SubspaceSystem& s, int order_max) {
  if (order_max < 1 || order_max > defaults::fgr_order_limit) {
    std::ostringstream msg;
    msg << "fgr_series_check: order_max must be in 1.."
        << defaults::fgr_order_limit;
    throw NumericError(msg.str());
  }
  const bool top = (s.excited_hamiltonian.rows() == 1);
  const Complex detuning_h = s.excited_hamiltonian(0, 0);
  const Complex detuning_e = top ? Complex(0.0) : s.excited_hamiltonian(1, 1);
  const Complex ga = top ? Complex(0.0) : s.excited_hamiltonian(0, 1);

  FgrSeriesCheck out;
  out.ratio = top ? 0.0 : std::abs(ga * ga / (detuning_h * detuning_e));
  if (out.ratio >= defaults::fgr_ratio_limit) {
    std::ostringstream msg;
    msg << "fgr_series_check: expansion ratio " << out.ratio
        << " >= " << defaults::fgr_ratio_limit
        << ", golden-rule series does not converge (the optimal coupling "
           "sits on the convergence boundary; use the closed forms there)";
    throw NumericError(msg.str());
  }

  const auto ops = effective_operators_subspace(s);
  out.closed_hg = ops.l_hg;
  out.closed_eg = ops.l_eg;

  const Complex hg_prefactor = s.l_hg_row(0) / detuning_h;
  Complex hg_sum = 0.0;
  Complex eg_sum = 0.0;
  for (int order = 1; order <= order_max; ++order) {
    const Complex term = fgr_effective_coupling(s, order);
    if (order % 2 == 1) {
      hg_sum += term;
      out.partial_hg.push_back(hg_prefactor * hg_sum);
    } else {
      eg_sum += term;
      const Complex eg_prefactor = top ? Complex(0.0) : s.l_eg_row(1) / detuning_e;
      out.partial_eg.push_back(eg_prefactor * eg_sum);
    }
  }
  out.residual_hg =
      out.partial_hg.empty() ? 0.0 : std::abs(out.partial_hg.back() - out.closed_hg);
  out.residual_eg =
      out.partial_eg.empty() ? 0.0 : std::abs(out.partial_eg.back() - out.closed_eg);
  return out;
}

ComplexMatrix vectorized_generator(const LindbladGenerator& gen) {
  gen.validate();
  const int d = gen.dim();
  if (d > defaults::vectorized_dim_limit) {
    std::ostringstream msg;
    msg << "vectorized_generator: dim " << d << " exceeds cap "
        << defaults::vectorized_dim_limit;
    throw NumericError(msg.str());
  }
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix big =
      -kImag * (kron(id, gen.hamiltonian) -
                kron(gen.hamiltonian.transpose(), id));
  for (const auto& l : gen.jumps) {
    const ComplexMatrix ldl = l.adjoint() * l;
    big += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) -
           0.5 * kron(ldl.transpose(), id);
  }
  return big;
}

DischargingRatios discharging_ratios(const BatteryModel& b,
                                     const ChargerParams& c, int n) {
  b.validate();
  c.validate();
  if (n < 1 || n > b.dim - 2) {
    std::ostringstream msg;
    msg << "discharging_ratios: n=" << n
        << " must have neighboring subspaces (1.." << b.dim - 2 << ")";
    throw NumericError(msg.str());
  }
  if (!(c.gamma_hg > 0.0) || !(c.gamma_eg > 0.0) || !(c.g > 0.0)) {
    throw NumericError(
        "discharging_ratios: gamma_hg, gamma_eg and g must be positive");
  }
  // Kronecker-sum resolvent of the excited pair {|h n-1>, |e n>}.
  const ComplexMatrix h_below =
      make_subspace(b, c, n - 1).excited_hamiltonian;
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix ksum =
      -kImag * kron(h_below.conjugate(), id) + kImag * kron(id, h_below);
  ComplexVector e_ee = ComplexVector::Zero(4);
  e_ee(3) = 1.0;  // |e n> (x) |e n>
  ComplexVector x;
  try {
    x = solve_linear(ksum, e_ee);
  } catch (const NumericError& e) {
    std::ostringstream msg;
    msg << "discharging_ratios: singular Kronecker-sum operator at n=" << n
        << " (" << e.what() << ")";
    throw NumericError(msg.str());
  }
  const double a_n = b.ladder_coeffs[n];
  const Complex dt_e = c.delta_tilde();
  DischargingRatios out;
  out.dephasing_ratio =
      c.gamma_eg * c.gamma_he / c.gamma_hg * std::abs(x(3));
  out.decay_ratio = c.gamma_hg * c.gamma_he * std::norm(dt_e) /
                    (c.gamma_eg * c.g * c.g * a_n * a_n) * std::abs(x(0));
  return out;
}

}  // namespace qbat
