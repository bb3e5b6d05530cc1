#pragma once

#include <functional>
#include <vector>

#include "linkguard/lti.hpp"

namespace linkguard {

/// Sampled closed-loop response. Samples are taken on the integration grid.
struct SimulationTrace {
  std::vector<double> time;
  std::vector<Vector> state;
  std::vector<Vector> input;        // u = -K x
  std::vector<Vector> output;       // y = C x + D u
  std::vector<Vector> disturbance;  // d(t)
  Vector x0;
};

using DisturbanceSignal = std::function<Vector(double)>;

/// Fixed-step RK4 integration of dx = A x + B u + W d with u = -K x.
SimulationTrace simulate_closed_loop(const LtiPlant& plant, const GainMatrix& K, const Vector& x0,
                                     const DisturbanceSignal& disturbance, double horizon,
                                     double dt = 1e-3);

/// d(t) = 0.
DisturbanceSignal zero_disturbance(const LtiPlant& plant);

}  // namespace linkguard
