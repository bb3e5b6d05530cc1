#include "linkguard/simulate.hpp"

#include <cmath>

#include "linkguard/error.hpp"

namespace linkguard {

DisturbanceSignal zero_disturbance(const LtiPlant& plant) {
  const Eigen::Index q = plant.disturbances();
  return [q](double) { return Vector::Zero(q); };
}

SimulationTrace simulate_closed_loop(const LtiPlant& plant, const GainMatrix& K, const Vector& x0,
                                     const DisturbanceSignal& disturbance, double horizon,
                                     double dt) {
  if (!(dt > 0.0) || horizon < 0.0) throw Error(ErrorCode::InvalidInput, "dt > 0 and horizon >= 0");
  if (x0.size() != plant.states()) throw Error(ErrorCode::DimensionMismatch, "x0 length");
  const Matrix acl = plant.A() - plant.B() * K.matrix();
  const Matrix& W = plant.W();
  const Matrix C = plant.C();
  const Matrix D = plant.D();

  auto rhs = [&](double t, const Vector& x) -> Vector { return acl * x + W * disturbance(t); };

  SimulationTrace trace;
  trace.x0 = x0;
  const auto steps = static_cast<long>(std::llround(horizon / dt));
  trace.time.reserve(steps + 1);
  Vector x = x0;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vector u = -K.matrix() * x;
    trace.time.push_back(t);
    trace.state.push_back(x);
    trace.input.push_back(u);
    trace.output.push_back(C * x + D * u);
    trace.disturbance.push_back(disturbance(t));
    if (k == steps) break;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Vector k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Vector k4 = rhs(t + dt, x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return trace;
}

}  // namespace linkguard
