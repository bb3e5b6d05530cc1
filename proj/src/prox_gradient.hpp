#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "linkguard/lti.hpp"

namespace linkguard::detail {

struct SmoothValue {
  double value = 0.0;
  Matrix gradient;
};

/// nullopt marks a point outside the domain (non-stabilizing gain).
using SmoothFunction = std::function<std::optional<SmoothValue>(const Matrix&)>;

/// Convex nonsmooth part h with a closed-form prox.
struct CompositeTerm {
  std::function<double(const Matrix&)> value;
  /// argmin_x  t h(x) + 0.5 ||x - v||^2
  std::function<Matrix(const Matrix& v, double t)> prox;
  /// First-order optimality residual at x given grad f(x).
  std::function<double(const Matrix& x, const Matrix& grad)> stationarity;
};

struct ProxGradientOptions {
  int max_iterations = 20000;
  /// Stop once stationarity <= tolerance * (1 + ||x||_F).
  double tolerance = 1e-8;
  double shrink = 0.5;
  double min_step = 1e-18;
  double max_step = 1e6;
  bool record_trace = false;
};

enum class ProxGradientStatus { Converged, Stalled, MaxIterations };

struct ProxGradientResult {
  Matrix x;
  double smooth_value = 0.0;
  double objective = 0.0;
  Matrix gradient;
  double stationarity = 0.0;
  int iterations = 0;
  ProxGradientStatus status = ProxGradientStatus::MaxIterations;
  /// Objective F = f + h after each accepted step, starting at x0.
  std::vector<double> objective_trace;

  bool converged() const { return status == ProxGradientStatus::Converged; }
};

/// Monotone forward-backward splitting with Barzilai-Borwein trial steps
/// and backtracking on the quadratic upper bound of f. Trial points outside
/// the domain of f are rejected like any failed line-search step.
/// Throws NotStabilizing when x0 is outside the domain.
ProxGradientResult minimize_composite(const SmoothFunction& f, const CompositeTerm& h,
                                      const Matrix& x0, const ProxGradientOptions& options);

/// Composite term for h = 0.
CompositeTerm zero_term();

}  // namespace linkguard::detail
