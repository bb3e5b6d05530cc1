#include "prox_gradient.hpp"

#include <cmath>

#include "linkguard/error.hpp"

namespace linkguard::detail {

CompositeTerm zero_term() {
  return {
      [](const Matrix&) { return 0.0; },
      [](const Matrix& v, double) { return v; },
      [](const Matrix&, const Matrix& g) { return g.norm(); },
  };
}

ProxGradientResult minimize_composite(const SmoothFunction& f, const CompositeTerm& h,
                                      const Matrix& x0, const ProxGradientOptions& options) {
  std::optional<SmoothValue> current = f(x0);
  if (!current) throw Error(ErrorCode::NotStabilizing, "initial point is not stabilizing");

  ProxGradientResult result;
  result.x = x0;
  double h_value = h.value(result.x);
  double objective = current->value + h_value;
  if (options.record_trace) result.objective_trace.push_back(objective);

  auto stationary = [&](const Matrix& x, const Matrix& g) {
    return h.stationarity(x, g) <= options.tolerance * (1.0 + x.norm());
  };

  double step = 1.0 / std::max(1.0, current->gradient.norm());
  result.stationarity = h.stationarity(result.x, current->gradient);
  if (stationary(result.x, current->gradient)) {
    result.status = ProxGradientStatus::Converged;
  } else {
    for (int it = 0; it < options.max_iterations; ++it) {
      std::optional<SmoothValue> trial;
      Matrix candidate;
      bool accepted = false;
      while (step >= options.min_step) {
        candidate = h.prox(result.x - step * current->gradient, step);
        const Matrix d = candidate - result.x;
        trial = f(candidate);
        if (trial) {
          const double bound = current->value + (current->gradient.array() * d.array()).sum() +
                               d.squaredNorm() / (2.0 * step);
          if (trial->value <= bound) {
            accepted = true;
            break;
          }
        }
        step *= options.shrink;
      }
      if (!accepted) {
        result.status = ProxGradientStatus::Stalled;
        break;
      }

      const Matrix s = candidate - result.x;
      const Matrix y = trial->gradient - current->gradient;
      result.x = std::move(candidate);
      current = std::move(trial);
      h_value = h.value(result.x);
      objective = current->value + h_value;
      result.iterations = it + 1;
      if (options.record_trace) result.objective_trace.push_back(objective);

      result.stationarity = h.stationarity(result.x, current->gradient);
      if (stationary(result.x, current->gradient)) {
        result.status = ProxGradientStatus::Converged;
        break;
      }
      if (s.squaredNorm() == 0.0) {
        result.status = ProxGradientStatus::Stalled;
        break;
      }

      const double sy = (s.array() * y.array()).sum();
      if (sy > 0.0) {
        step = std::min(options.max_step, s.squaredNorm() / sy);
      } else {
        step = std::min(options.max_step, 2.0 * step);
      }
    }
  }

  result.smooth_value = current->value;
  result.objective = objective;
  result.gradient = current->gradient;
  return result;
}

}  // namespace linkguard::detail
