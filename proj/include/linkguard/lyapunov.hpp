#pragma once

#include <complex>

#include "linkguard/lti.hpp"

namespace linkguard {

/// Bartels-Stewart solver built on one complex Schur factorization
/// Acl = U T U^H. Both Gramian equations reuse the same factorization.
class LyapunovSolver {
 public:
  explicit LyapunovSolver(const Matrix& acl);

  /// max Re(lambda(Acl)).
  double spectral_abscissa() const { return abscissa_; }
  bool is_hurwitz(double tol = kStabilityTol) const { return abscissa_ < -tol; }

  /// Solves Acl^T P + P Acl + rhs = 0 (observability form).
  Matrix solve_observability(const Matrix& rhs) const;
  /// Solves Acl L + L Acl^T + rhs = 0 (controllability form).
  Matrix solve_controllability(const Matrix& rhs) const;

 private:
  using ComplexMatrix = Eigen::MatrixXcd;

  void check_solvable() const;

  ComplexMatrix T_;
  ComplexMatrix U_;
  double abscissa_ = 0.0;
};

/// Solves Acl^T P + P Acl + Qhat = 0. Throws NotHurwitz when
/// max Re(lambda) >= -stability_tol and SingularSolve when the Sylvester
/// operator is numerically singular.
Matrix solve_lyapunov(const Matrix& acl, const Matrix& qhat, double stability_tol = kStabilityTol);

}  // namespace linkguard
