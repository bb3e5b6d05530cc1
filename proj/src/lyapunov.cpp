#include "linkguard/lyapunov.hpp"

#include <Eigen/Eigenvalues>

#include "linkguard/error.hpp"

namespace linkguard {

namespace {

using Complex = std::complex<double>;

Matrix symmetric_part(const Eigen::MatrixXcd& M) {
  Matrix real = M.real();
  return 0.5 * (real + real.transpose());
}

}  // namespace

LyapunovSolver::LyapunovSolver(const Matrix& acl) {
  if (acl.rows() != acl.cols())
    throw Error(ErrorCode::DimensionMismatch, "Lyapunov operator must be square");
  Eigen::ComplexSchur<ComplexMatrix> schur(acl.cast<Complex>());
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSolve, "Schur factorization failed");
  T_ = schur.matrixT();
  U_ = schur.matrixU();
  abscissa_ = T_.diagonal().real().maxCoeff();
}

void LyapunovSolver::check_solvable() const {
  // lambda_i + conj(lambda_j) = 0 makes the operator singular; its smallest
  // magnitude over pairs is at least 2 * |min Re lambda| when all real parts
  // share a sign, so checking the abscissa is enough for Hurwitz operators.
  const double scale = std::max(1.0, T_.diagonal().cwiseAbs().maxCoeff());
  const auto n = T_.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(std::conj(T_(i, i)) + T_(j, j)) <= 1e-14 * scale)
        throw Error(ErrorCode::SingularSolve, "Lyapunov operator is singular");
}

Matrix LyapunovSolver::solve_observability(const Matrix& rhs) const {
  const Eigen::Index n = T_.rows();
  if (rhs.rows() != n || rhs.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "Lyapunov right-hand side");
  check_solvable();
  // T^H Y + Y T = -C with Y = U^H P U, C = U^H rhs U. Column j of Y solves a
  // lower-triangular system once columns < j are known.
  const ComplexMatrix C = U_.adjoint() * rhs.cast<Complex>() * U_;
  ComplexMatrix Y = ComplexMatrix::Zero(n, n);
  Eigen::VectorXcd r(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r = -C.col(j);
    if (j > 0) r.noalias() -= Y.leftCols(j) * T_.col(j).head(j);
    const Complex tjj = T_(j, j);
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = r(i);
      if (i > 0) acc -= T_.col(i).head(i).dot(Y.col(j).head(i));
      Y(i, j) = acc / (std::conj(T_(i, i)) + tjj);
    }
  }
  return symmetric_part(U_ * Y * U_.adjoint());
}

Matrix LyapunovSolver::solve_controllability(const Matrix& rhs) const {
  const Eigen::Index n = T_.rows();
  if (rhs.rows() != n || rhs.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "Lyapunov right-hand side");
  check_solvable();
  // T Z + Z T^H = -C with Z = U^H L U. Columns are resolved from the last
  // one backwards with an upper-triangular solve each.
  const ComplexMatrix C = U_.adjoint() * rhs.cast<Complex>() * U_;
  ComplexMatrix Z = ComplexMatrix::Zero(n, n);
  Eigen::VectorXcd r(n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const Eigen::Index tail = n - 1 - j;
    r = -C.col(j);
    if (tail > 0) r.noalias() -= Z.rightCols(tail) * T_.row(j).tail(tail).adjoint();
    const Complex tjj = std::conj(T_(j, j));
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      const Eigen::Index after = n - 1 - i;
      Complex acc = r(i);
      if (after > 0) acc -= T_.row(i).tail(after).transpose().cwiseProduct(Z.col(j).tail(after)).sum();
      Z(i, j) = acc / (T_(i, i) + tjj);
    }
  }
  return symmetric_part(U_ * Z * U_.adjoint());
}

Matrix solve_lyapunov(const Matrix& acl, const Matrix& qhat, double stability_tol) {
  LyapunovSolver solver(acl);
  if (!solver.is_hurwitz(stability_tol))
    throw Error(ErrorCode::NotHurwitz, "max Re(lambda) = " + std::to_string(solver.spectral_abscissa()));
  return solver.solve_observability(qhat);
}

}  // namespace linkguard
