#include "linkguard/sparse_synthesis.hpp"

#include <cmath>

#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"
#include "prox_gradient.hpp"

namespace linkguard {

void SparsityConfig::validate() const {
  for (std::size_t k = 0; k < beta_schedule.size(); ++k) {
    if (!(beta_schedule[k] >= 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be non-negative");
    if (k > 0 && !(beta_schedule[k] > beta_schedule[k - 1]))
      throw Error(ErrorCode::InvalidInput, "beta schedule must be strictly increasing");
  }
  if (!(epsilon_reweight > 0.0 && epsilon_reweight < 1.0))
    throw Error(ErrorCode::InvalidInput, "epsilon_reweight must lie in (0, 1)");
  if (!(zero_threshold > 0.0)) throw Error(ErrorCode::InvalidInput, "zero_threshold must be positive");
  if (max_reweight < 1) throw Error(ErrorCode::InvalidInput, "max_reweight must be >= 1");
  polish.validate();
}

std::vector<double> default_beta_schedule(double jc, int points, double lo_factor,
                                          double hi_factor) {
  if (points < 1 || !(jc > 0.0) || !(lo_factor > 0.0) || !(hi_factor > lo_factor))
    throw Error(ErrorCode::InvalidInput, "invalid beta schedule parameters");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double lo = std::log10(lo_factor * jc);
  const double hi = std::log10(hi_factor * jc);
  for (int k = 0; k < points; ++k) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    out[static_cast<std::size_t>(k)] = std::pow(10.0, lo + frac * (hi - lo));
  }
  return out;
}

Matrix reweight(const Matrix& norms, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "reweight epsilon must be positive");
  return (norms.array() + eps).inverse().matrix();
}

Matrix block_soft_threshold(const Matrix& V, const BlockPartition& p, const Matrix& thresholds) {
  Matrix out = V;
  for (int i = 0; i < p.block_rows(); ++i) {
    for (int j = 0; j < p.block_cols(); ++j) {
      auto block = out.block(p.row_offset(i), p.col_offset(j), p.row_size(i), p.col_size(j));
      const double norm = block.norm();
      const double tau = thresholds(i, j);
      if (norm <= tau) {
        block.setZero();
      } else {
        block *= 1.0 - tau / norm;
      }
    }
  }
  return out;
}

SparseGainResult sparse_gain(const LtiPlant& plant, double beta, const Matrix& weights,
                             const GainMatrix& K_init, const SparsityConfig& config) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be non-negative");
  const BlockPartition& p = plant.partition();
  if (weights.rows() != p.block_rows() || weights.cols() != p.block_cols())
    throw Error(ErrorCode::DimensionMismatch, "weights must be one per block");

  const H2Objective objective(plant);
  const Matrix scaled = beta * weights;
  detail::CompositeTerm penalty{
      [&](const Matrix& K) {
        return (scaled.array() * block_frobenius(GainMatrix(K, p)).array()).sum();
      },
      [&](const Matrix& v, double t) { return block_soft_threshold(v, p, t * scaled); },
      [&](const Matrix& K, const Matrix& g) {
        return (K - block_soft_threshold(K - g, p, scaled)).norm();
      },
  };
  detail::SmoothFunction smooth = [&](const Matrix& K) -> std::optional<detail::SmoothValue> {
    auto e = objective.evaluate(K);
    if (!e) return std::nullopt;
    return detail::SmoothValue{e->value, std::move(e->gradient)};
  };

  detail::ProxGradientOptions options;
  options.tolerance = config.tolerance;
  options.max_iterations = config.max_iterations;
  options.record_trace = true;
  auto r = detail::minimize_composite(smooth, penalty, K_init.matrix(), options);
  if (r.status == detail::ProxGradientStatus::MaxIterations)
    throw Error(ErrorCode::MaxIterations, "sparsity-promoting solve hit the iteration cap");
  const bool near_stationary = r.stationarity <= 1e2 * config.tolerance * (1.0 + r.x.norm());
  if (r.status == detail::ProxGradientStatus::Stalled && !near_stationary)
    throw Error(ErrorCode::LostStabilizability, "every trial step left the stabilizing set");
  return {GainMatrix(std::move(r.x), p), r.iterations, r.converged(), std::move(r.objective_trace)};
}

SweepResult sparsity_sweep(const LtiPlant& plant, const SparsityConfig& config) {
  config.validate();
  SweepResult sweep;
  GainMatrix K = lqr_centralized(plant);
  std::optional<GainMatrix> previous_polished;

  for (double beta : config.beta_schedule) {
    for (int pass = 0; pass < config.max_reweight; ++pass) {
      const Matrix G = reweight(block_frobenius(K), config.epsilon_reweight);
      K = sparse_gain(plant, beta, G, K, config).gain;
    }
    SparsityPattern pattern = SparsityPattern::from_gain(K, config.zero_threshold);

    // Polish from the sparse iterate, and also from the previous footprint's
    // optimum when it fits the new pattern; keep the better local optimum.
    std::optional<StructuredResult> best;
    auto consider = [&](StructuredResult candidate) {
      if (!best || candidate.cost < best->cost) best = std::move(candidate);
    };
    const Matrix I = pattern.structural_identity();
    if (is_stabilizing(plant, GainMatrix(K.matrix().cwiseProduct(I), plant.partition()))) {
      consider(polish_structured(plant, pattern, K, config.polish));
    } else {
      consider(synthesize_structured(plant, pattern, config.polish, K));
    }
    if (previous_polished) {
      const GainMatrix projected(previous_polished->matrix().cwiseProduct(I), plant.partition());
      if (is_stabilizing(plant, projected))
        consider(polish_structured(plant, pattern, projected, config.polish));
    }

    previous_polished = best->gain;
    sweep.entries.push_back(SweepEntry{beta, K, pattern, pattern.free_count(), best->gain,
                                       best->cost});
  }
  return sweep;
}

}  // namespace linkguard
