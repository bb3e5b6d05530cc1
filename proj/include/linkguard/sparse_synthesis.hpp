#pragma once

#include <vector>

#include "linkguard/lti.hpp"
#include "linkguard/structured_h2.hpp"

namespace linkguard {

struct SparsityConfig {
  /// Strictly increasing, non-negative.
  std::vector<double> beta_schedule;
  double epsilon_reweight = 1e-3;
  /// Block Frobenius norm below which a block counts as zero.
  double zero_threshold = 1e-6;
  int max_reweight = 3;
  /// Proximal-gradient iteration cap per solve.
  int max_iterations = 50000;
  /// Stop once ||K - prox(K - grad J(K))||_F <= tolerance * (1 + ||K||_F).
  double tolerance = 1e-6;
  /// Settings for polishing each footprint.
  AugLagConfig polish;

  void validate() const;
};

/// `points` log-spaced values from lo_factor * jc to hi_factor * jc.
std::vector<double> default_beta_schedule(double jc, int points = 30, double lo_factor = 1e-4,
                                          double hi_factor = 1e2);

/// G_ij = 1 / (norms_ij + eps).
Matrix reweight(const Matrix& norms, double eps);

/// Blockwise shrinkage: block (i,j) of V becomes (1 - tau_ij/||V_ij||_F)_+ V_ij.
Matrix block_soft_threshold(const Matrix& V, const BlockPartition& partition,
                            const Matrix& thresholds);

struct SparseGainResult {
  GainMatrix gain;
  int iterations = 0;
  bool converged = false;
  /// J(K) + beta * sum G_ij ||K_ij||_F at K_init and after each accepted step.
  std::vector<double> objective_trace;
};

/// Minimizes J(K) + beta * sum G_ij ||K_ij||_F from a stabilizing K_init by
/// proximal gradient. Every iterate is stabilizing. Throws
/// LostStabilizability when no stabilizing descent step exists away from a
/// stationary point, MaxIterations when the cap is hit.
SparseGainResult sparse_gain(const LtiPlant& plant, double beta, const Matrix& weights,
                             const GainMatrix& K_init, const SparsityConfig& config = {});

struct SweepEntry {
  double beta = 0.0;
  GainMatrix gain;
  SparsityPattern pattern;
  int nnz_blocks = 0;
  /// Gain and cost of the structured optimum on `pattern`.
  GainMatrix polished;
  double j_polished = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
};

/// Warm-started sweep over the beta schedule starting from the centralized
/// LQR gain, with `max_reweight` reweighting passes per beta.
SweepResult sparsity_sweep(const LtiPlant& plant, const SparsityConfig& config);

}  // namespace linkguard
