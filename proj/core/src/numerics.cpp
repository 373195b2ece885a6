#include "qbat/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace qbat {

void require_finite(const ComplexMatrix& m, const char* context) {
  if (!m.allFinite()) {
    std::ostringstream msg;
    msg << context << ": non-finite entries";
    throw NumericError(msg.str());
  }
}

HermitianEigenDecomposition hermitian_eigh(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw NumericError("hermitian_eigh: matrix not square");
  }
  require_finite(m, "hermitian_eigh");
  const double scale = m.norm();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > defaults::hermiticity_rel_tol * std::max(scale, 1e-300)) {
    std::ostringstream msg;
    msg << "hermitian_eigh: input not Hermitian, max asymmetry " << asym
        << " exceeds " << defaults::hermiticity_rel_tol * scale;
    throw NumericError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigh: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
  if (a.rows() != a.cols()) {
    throw NumericError("solve_linear: matrix not square");
  }
  if (a.rows() != b.size()) {
    throw NumericError("solve_linear: dimension mismatch");
  }
  require_finite(a, "solve_linear");
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / defaults::solve_condition_limit)) {
    std::ostringstream msg;
    msg << "solve_linear: matrix singular or ill-conditioned, condition estimate "
        << (rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
    throw NumericError(msg.str());
  }
  ComplexVector x = lu.solve(b);
  const double residual = (a * x - b).norm();
  const double bound =
      defaults::solve_residual_rel_tol * (a.norm() * x.norm() + b.norm());
  if (residual > bound) {
    std::ostringstream msg;
    msg << "solve_linear: residual " << residual << " exceeds bound " << bound
        << " (condition estimate " << 1.0 / rcond << ")";
    throw NumericError(msg.str());
  }
  return x;
}

}  // namespace qbat
