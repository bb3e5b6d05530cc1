#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "linkguard/lti.hpp"

namespace linkguard {

struct AugLagConfig {
  double gamma0 = 1.0;
  /// Penalty growth factor, > 1.
  double alpha = 5.0;
  /// Stop once ||K o I^c||_F < eps_stop.
  double eps_stop = 1e-6;
  int max_outer = 50;
  /// Inner stopping: ||grad L_gamma(K)||_F <= inner_tol * (1 + ||K||_F).
  double inner_tol = 1e-5;
  int inner_max_iterations = 20000;
  /// Structured polish stopping: ||grad J(K) o I||_F <= polish_tol * (1 + ||K||_F).
  double polish_tol = 1e-8;
  int polish_max_iterations = 50000;

  void validate() const;
};

struct AugLagState {
  int iteration = 0;
  double gamma = 0.0;
  /// ||K o I^c||_F after the inner minimization of this iteration.
  double violation = 0.0;
  /// L_gamma at the inner minimizer.
  double lagrangian = 0.0;
  /// Multiplier after this iteration's update.
  Matrix lambda;
  Matrix K;
};

/// L_gamma(K, Lambda) = J(K) + trace(Lambda^T (K o I^c)) + gamma/2 ||K o I^c||_F^2.
/// Throws NotStabilizing.
double augmented_lagrangian(const LtiPlant& plant, const GainMatrix& K, const Matrix& lambda,
                            double gamma, const SparsityPattern& pattern);

/// grad L_gamma = grad J(K) + Lambda o I^c + gamma (K o I^c). Throws NotStabilizing.
Matrix augmented_lagrangian_gradient(const LtiPlant& plant, const GainMatrix& K,
                                     const Matrix& lambda, double gamma,
                                     const SparsityPattern& pattern);

struct InnerResult {
  GainMatrix gain;
  int iterations = 0;
  double gradient_norm = 0.0;
  /// L_gamma at every accepted iterate, starting with K_init.
  std::vector<double> trace;
};

/// Minimizes L_gamma over unstructured K from a stabilizing K_init.
/// Throws LineSearchFailure or MaxIterations when the gradient tolerance is
/// not reached.
InnerResult minimize_inner(const LtiPlant& plant, const Matrix& lambda, double gamma,
                           const SparsityPattern& pattern, const GainMatrix& K_init,
                           const AugLagConfig& config = {});

struct StructuredResult {
  explicit StructuredResult(GainMatrix K) : gain(std::move(K)) {}

  GainMatrix gain;
  double cost = 0.0;
  /// Outer multiplier iterations performed.
  int iterations = 0;
  /// True when the constraint residual dropped below eps_stop.
  bool converged = false;
  /// Structured stationarity ||grad J o I||_F of the returned gain.
  double projected_gradient_norm = 0.0;
  std::vector<AugLagState> history;
};

/// Structured H2 synthesis on `pattern` by the augmented Lagrangian method,
/// followed by projection onto the pattern and a structured polish. The
/// returned gain is exactly zero outside the pattern and stabilizing.
/// `initial` defaults to the centralized LQR gain. Throws
/// PatternNotStabilizable when no stabilizing structured gain was reached.
StructuredResult synthesize_structured(const LtiPlant& plant, const SparsityPattern& pattern,
                                       const AugLagConfig& config = {},
                                       const std::optional<GainMatrix>& initial = std::nullopt);

/// Best of `synthesize_structured` from its default start and a structured
/// polish of `warm` projected onto the pattern (used when that projection is
/// stabilizing). Throws PatternNotStabilizable when neither route succeeds.
StructuredResult synthesize_structured_warm(const LtiPlant& plant, const SparsityPattern& pattern,
                                            const AugLagConfig& config, const GainMatrix& warm);

/// Projected-gradient descent of J over the free entries of `pattern`,
/// starting from a stabilizing gain supported on the pattern.
StructuredResult polish_structured(const LtiPlant& plant, const SparsityPattern& pattern,
                                   const GainMatrix& K, const AugLagConfig& config = {});

}  // namespace linkguard
