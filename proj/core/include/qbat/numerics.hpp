#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qbat/errors.hpp"

namespace qbat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Frozen numerical defaults. Every tolerance used by the library is either
// listed here or taken from a caller-supplied OdeTolerances.
namespace defaults {
inline constexpr double ode_rel_tol = 1e-8;
inline constexpr double ode_abs_tol = 1e-10;
inline constexpr double hermiticity_rel_tol = 1e-10;   // eigh / generator inputs
inline constexpr double solve_residual_rel_tol = 1e-10;
inline constexpr double solve_condition_limit = 1e12;
inline constexpr double density_trace_tol = 1e-9;
inline constexpr double density_hermiticity_tol = 1e-9;
inline constexpr double density_negativity_tol = 1e-7;
inline constexpr double resonance_rel_tol = 1e-12;     // |den| vs |detuning product|
inline constexpr int vectorized_dim_limit = 64;        // d^2 x d^2 dense cap
inline constexpr int fgr_order_limit = 200;
inline constexpr double fgr_ratio_limit = 0.95;
inline constexpr double saturation_threshold = 0.99;   // fraction of max ergotropy
inline constexpr int grid_points = 400;
}  // namespace defaults

struct OdeTolerances {
  double rel = defaults::ode_rel_tol;
  double abs = defaults::ode_abs_tol;

  bool operator==(const OdeTolerances&) const = default;
};

struct HermitianEigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns paired with eigenvalues
};

// Throws NumericError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* context);

// Eigendecomposition of a Hermitian matrix. Rejects inputs whose asymmetry
// max|m - m^dag| exceeds hermiticity_rel_tol * ||m||_F, reporting the
// measured asymmetry.
HermitianEigenDecomposition hermitian_eigh(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Dense LU solve of a x = b. Rejects matrices whose estimated condition
// number exceeds solve_condition_limit, and verifies the residual
// ||a x - b|| <= solve_residual_rel_tol * (||a|| ||x|| + ||b||).
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

}  // namespace qbat
