#pragma once

#include <optional>

#include "linkguard/lti.hpp"

namespace linkguard {

// Closed-loop convention throughout: Acl = A - B K.

bool is_stabilizing(const LtiPlant& plant, const GainMatrix& K, double tol = kStabilityTol);

/// J(K) = trace(W^T P W) with (A-BK)^T P + P (A-BK) = -(Q + K^T R K);
/// infinite when K is not stabilizing.
Cost closed_loop_cost(const LtiPlant& plant, const GainMatrix& K);

/// grad J(K) = 2 (R K - B^T P) L, where L is the controllability Gramian
/// (A-BK) L + L (A-BK)^T = -W W^T. Throws NotStabilizing.
Matrix cost_gradient(const LtiPlant& plant, const GainMatrix& K);

/// Value and gradient of J sharing one Schur factorization per point.
class H2Objective {
 public:
  explicit H2Objective(const LtiPlant& plant);

  struct Evaluation {
    double value = 0.0;
    Matrix gradient;
    Matrix observability;    // P
    Matrix controllability;  // L
  };

  /// nullopt when K is not stabilizing.
  std::optional<Evaluation> evaluate(const Matrix& K, bool with_gradient = true) const;

  const LtiPlant& plant() const { return plant_; }

 private:
  const LtiPlant& plant_;
  Matrix WWt_;
};

/// Centralized LQR gain K = R^{-1} B^T P from the stabilizing ARE solution,
/// computed by Kleinman-Newton iteration.
GainMatrix lqr_centralized(const LtiPlant& plant);

/// Stabilizing ARE solution A^T P + P A - P B R^{-1} B^T P + Q = 0.
Matrix solve_care(const LtiPlant& plant);

}  // namespace linkguard
