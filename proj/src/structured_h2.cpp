#include "linkguard/structured_h2.hpp"

#include <cmath>

#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"
#include "prox_gradient.hpp"

namespace linkguard {

namespace {

detail::SmoothFunction h2_smooth(const H2Objective& objective) {
  return [&objective](const Matrix& K) -> std::optional<detail::SmoothValue> {
    auto e = objective.evaluate(K);
    if (!e) return std::nullopt;
    return detail::SmoothValue{e->value, std::move(e->gradient)};
  };
}

// h(K) = trace(Lambda^T (K o Ic)) + gamma/2 ||K o Ic||^2, separable per entry.
detail::CompositeTerm penalty_term(const Matrix& lambda_c, double gamma, const Matrix& Ic) {
  return {
      [=](const Matrix& K) {
        const Matrix V = K.cwiseProduct(Ic);
        return (lambda_c.array() * V.array()).sum() + 0.5 * gamma * V.squaredNorm();
      },
      [=](const Matrix& v, double t) {
        const Matrix shrunk = (v - t * lambda_c) / (1.0 + t * gamma);
        return Matrix(v.cwiseProduct(Matrix::Ones(v.rows(), v.cols()) - Ic) + shrunk.cwiseProduct(Ic));
      },
      [=](const Matrix& K, const Matrix& g) {
        return (g + lambda_c + gamma * K.cwiseProduct(Ic)).norm();
      },
  };
}

detail::CompositeTerm subspace_term(const Matrix& I) {
  return {
      [](const Matrix&) { return 0.0; },
      [=](const Matrix& v, double) { return Matrix(v.cwiseProduct(I)); },
      [=](const Matrix&, const Matrix& g) { return g.cwiseProduct(I).norm(); },
  };
}

detail::ProxGradientResult run_inner(const H2Objective& objective, const Matrix& lambda,
                                     double gamma, const Matrix& Ic, const Matrix& K_init,
                                     const AugLagConfig& config, bool record) {
  detail::ProxGradientOptions options;
  options.tolerance = config.inner_tol;
  options.max_iterations = config.inner_max_iterations;
  options.record_trace = record;
  return detail::minimize_composite(h2_smooth(objective),
                                    penalty_term(lambda.cwiseProduct(Ic), gamma, Ic), K_init,
                                    options);
}

void check_pattern(const LtiPlant& plant, const SparsityPattern& pattern) {
  if (!(pattern.partition() == plant.partition()))
    throw Error(ErrorCode::DimensionMismatch, "pattern partition differs from plant partition");
}

}  // namespace

void AugLagConfig::validate() const {
  if (!(alpha > 1.0) || !(gamma0 > 0.0) || !(eps_stop > 0.0) || max_outer < 1)
    throw Error(ErrorCode::InvalidInput, "augmented Lagrangian needs alpha > 1, gamma0 > 0, eps > 0");
}

double augmented_lagrangian(const LtiPlant& plant, const GainMatrix& K, const Matrix& lambda,
                            double gamma, const SparsityPattern& pattern) {
  check_pattern(plant, pattern);
  const Cost J = closed_loop_cost(plant, K);
  if (!J.is_finite()) throw Error(ErrorCode::NotStabilizing, "augmented Lagrangian at non-stabilizing K");
  const Matrix V = K.matrix().cwiseProduct(pattern.complement_identity());
  return J.value() + (lambda.transpose() * V).trace() + 0.5 * gamma * V.squaredNorm();
}

Matrix augmented_lagrangian_gradient(const LtiPlant& plant, const GainMatrix& K,
                                     const Matrix& lambda, double gamma,
                                     const SparsityPattern& pattern) {
  check_pattern(plant, pattern);
  const Matrix Ic = pattern.complement_identity();
  return cost_gradient(plant, K) + lambda.cwiseProduct(Ic) + gamma * K.matrix().cwiseProduct(Ic);
}

InnerResult minimize_inner(const LtiPlant& plant, const Matrix& lambda, double gamma,
                           const SparsityPattern& pattern, const GainMatrix& K_init,
                           const AugLagConfig& config) {
  check_pattern(plant, pattern);
  const H2Objective objective(plant);
  auto r = run_inner(objective, lambda, gamma, pattern.complement_identity(), K_init.matrix(),
                     config, true);
  if (r.status == detail::ProxGradientStatus::MaxIterations)
    throw Error(ErrorCode::MaxIterations, "inner minimization did not converge");
  if (r.status == detail::ProxGradientStatus::Stalled &&
      r.stationarity > 1e2 * config.inner_tol * (1.0 + r.x.norm()))
    throw Error(ErrorCode::LineSearchFailure, "no acceptable step from a non-stationary point");
  return {GainMatrix(std::move(r.x), plant.partition()), r.iterations, r.stationarity,
          std::move(r.objective_trace)};
}

StructuredResult polish_structured(const LtiPlant& plant, const SparsityPattern& pattern,
                                   const GainMatrix& K, const AugLagConfig& config) {
  check_pattern(plant, pattern);
  const Matrix I = pattern.structural_identity();
  const Matrix start = K.matrix().cwiseProduct(I);
  const H2Objective objective(plant);
  if (!objective.evaluate(start, false))
    throw Error(ErrorCode::PatternNotStabilizable, "polish start is not stabilizing");
  detail::ProxGradientOptions options;
  options.tolerance = config.polish_tol;
  options.max_iterations = config.polish_max_iterations;
  auto r = detail::minimize_composite(h2_smooth(objective), subspace_term(I), start, options);
  StructuredResult out{GainMatrix(std::move(r.x), plant.partition())};
  out.cost = r.smooth_value;
  out.converged = r.status != detail::ProxGradientStatus::MaxIterations;
  out.projected_gradient_norm = r.stationarity;
  return out;
}

StructuredResult synthesize_structured(const LtiPlant& plant, const SparsityPattern& pattern,
                                       const AugLagConfig& config,
                                       const std::optional<GainMatrix>& initial) {
  config.validate();
  check_pattern(plant, pattern);
  const H2Objective objective(plant);
  const Matrix I = pattern.structural_identity();
  const Matrix Ic = pattern.complement_identity();

  Matrix K;
  if (initial && objective.evaluate(initial->matrix(), false)) {
    K = initial->matrix();
  } else {
    K = lqr_centralized(plant).matrix();
  }

  Matrix lambda = Matrix::Zero(K.rows(), K.cols());
  double gamma = config.gamma0;
  std::optional<Matrix> stabilizing_projection;
  std::vector<AugLagState> history;
  bool converged = false;
  int iterations = 0;

  for (int i = 0; i < config.max_outer; ++i) {
    auto inner = run_inner(objective, lambda, gamma, Ic, K, config, false);
    K = std::move(inner.x);
    const Matrix violation = K.cwiseProduct(Ic);
    const double residual = violation.norm();
    const double lagrangian = inner.objective;
    lambda += gamma * violation;
    history.push_back({i, gamma, residual, lagrangian, lambda, K});
    iterations = i + 1;

    Matrix projected = K.cwiseProduct(I);
    if (objective.evaluate(projected, false)) stabilizing_projection = std::move(projected);
    if (residual < config.eps_stop) {
      converged = true;
      break;
    }
    gamma *= config.alpha;
  }

  if (!stabilizing_projection)
    throw Error(ErrorCode::PatternNotStabilizable,
                "no stabilizing gain supported on the pattern was reached");

  StructuredResult out = polish_structured(
      plant, pattern, GainMatrix(*stabilizing_projection, plant.partition()), config);
  out.iterations = iterations;
  out.converged = converged && out.converged;
  out.history = std::move(history);
  return out;
}

StructuredResult synthesize_structured_warm(const LtiPlant& plant, const SparsityPattern& pattern,
                                            const AugLagConfig& config, const GainMatrix& warm) {
  std::optional<StructuredResult> best;
  try {
    best = synthesize_structured(plant, pattern, config);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PatternNotStabilizable) throw;
  }
  const GainMatrix projected(warm.matrix().cwiseProduct(pattern.structural_identity()),
                             plant.partition());
  if (is_stabilizing(plant, projected)) {
    StructuredResult polished = polish_structured(plant, pattern, projected, config);
    if (!best || polished.cost < best->cost) best = std::move(polished);
  }
  if (!best) throw Error(ErrorCode::PatternNotStabilizable, "no stabilizing structured gain found");
  return std::move(*best);
}

}  // namespace linkguard
