#include "linkguard/h2.hpp"

#include <cmath>

#include "linkguard/error.hpp"
#include "linkguard/lyapunov.hpp"

namespace linkguard {

namespace {

constexpr int kKleinmanMaxIterations = 100;
constexpr double kKleinmanTol = 1e-10;

void check_shapes(const LtiPlant& plant, const Matrix& K) {
  if (K.rows() != plant.inputs() || K.cols() != plant.states())
    throw Error(ErrorCode::DimensionMismatch, "gain shape does not match plant");
}

// Bass's shift: with sigma > max Re lambda(A), Z solving
// (A + sigma I) Z + Z (A + sigma I)^T = 2 B B^T makes K = B^T Z^{-1}
// place every closed-loop eigenvalue left of -sigma. Needs (A, B)
// controllable for Z to be invertible.
std::optional<Matrix> shifted_seed(const LtiPlant& plant) {
  const Matrix& A = plant.A();
  const Matrix& B = plant.B();
  const LyapunovSolver open_loop(A);
  const double sigma = std::max(0.0, open_loop.spectral_abscissa()) + 1.0;
  Matrix M = -A;
  M.diagonal().array() -= sigma;
  const LyapunovSolver shifted(M);
  if (!shifted.is_hurwitz()) return std::nullopt;
  const Matrix Z = shifted.solve_controllability(2.0 * B * B.transpose());
  Eigen::LLT<Matrix> llt(Z);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Matrix K = llt.solve(B).transpose();
  if (!K.allFinite()) return std::nullopt;
  if (!LyapunovSolver(A - B * K).is_hurwitz()) return std::nullopt;
  return K;
}

// Matrix-sign-function ARE solve (Roberts/Byers). Used only when the shifted
// seed is unavailable (stabilizable but not controllable plants).
std::optional<Matrix> sign_function_care(const LtiPlant& plant) {
  const Eigen::Index n = plant.states();
  const Matrix G = plant.B() * plant.R().llt().solve(plant.B().transpose());
  Matrix Z(2 * n, 2 * n);
  Z << plant.A(), -G, -plant.Q(), -plant.A().transpose();
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Matrix> lu(Z);
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < Z.rows(); ++k) log_det += std::log(std::abs(lu.matrixLU()(k, k)));
    const double c = std::exp(-log_det / static_cast<double>(Z.rows()));
    const Matrix next = 0.5 * (c * Z + lu.inverse() / c);
    const double change = (next - Z).lpNorm<1>();
    Z = next;
    if (!Z.allFinite()) return std::nullopt;
    if (change <= 1e-12 * Z.lpNorm<1>()) break;
  }
  Matrix lhs(2 * n, n), rhs(2 * n, n);
  lhs << Z.topRightCorner(n, n), Z.bottomRightCorner(n, n) + Matrix::Identity(n, n);
  rhs << Z.topLeftCorner(n, n) + Matrix::Identity(n, n), Z.bottomLeftCorner(n, n);
  Matrix P = lhs.colPivHouseholderQr().solve(-rhs);
  P = 0.5 * (P + P.transpose());
  if (!P.allFinite()) return std::nullopt;
  return P;
}

}  // namespace

bool is_stabilizing(const LtiPlant& plant, const GainMatrix& K, double tol) {
  check_shapes(plant, K.matrix());
  return LyapunovSolver(plant.A() - plant.B() * K.matrix()).is_hurwitz(tol);
}

H2Objective::H2Objective(const LtiPlant& plant)
    : plant_(plant), WWt_(plant.W() * plant.W().transpose()) {}

std::optional<H2Objective::Evaluation> H2Objective::evaluate(const Matrix& K,
                                                             bool with_gradient) const {
  check_shapes(plant_, K);
  if (!K.allFinite()) return std::nullopt;
  const LyapunovSolver solver(plant_.A() - plant_.B() * K);
  if (!solver.is_hurwitz()) return std::nullopt;
  Evaluation e;
  e.observability = solver.solve_observability(plant_.Q() + K.transpose() * plant_.R() * K);
  e.value = (plant_.W().transpose() * e.observability * plant_.W()).trace();
  if (!std::isfinite(e.value)) return std::nullopt;
  if (with_gradient) {
    e.controllability = solver.solve_controllability(WWt_);
    e.gradient = 2.0 * (plant_.R() * K - plant_.B().transpose() * e.observability) * e.controllability;
  }
  return e;
}

Cost closed_loop_cost(const LtiPlant& plant, const GainMatrix& K) {
  const auto e = H2Objective(plant).evaluate(K.matrix(), false);
  return e ? Cost::finite(e->value) : Cost::infinite();
}

Matrix cost_gradient(const LtiPlant& plant, const GainMatrix& K) {
  const auto e = H2Objective(plant).evaluate(K.matrix(), true);
  if (!e) throw Error(ErrorCode::NotStabilizing, "gradient requested at a non-stabilizing gain");
  return e->gradient;
}

Matrix solve_care(const LtiPlant& plant) {
  const Matrix& A = plant.A();
  const Matrix& B = plant.B();
  const Eigen::LLT<Matrix> R_llt(plant.R());

  Matrix K;
  if (LyapunovSolver(A).is_hurwitz()) {
    K = Matrix::Zero(plant.inputs(), plant.states());
  } else if (auto seed = shifted_seed(plant)) {
    K = *seed;
  } else if (auto P = sign_function_care(plant)) {
    K = R_llt.solve(B.transpose() * *P);
  } else {
    throw Error(ErrorCode::RiccatiFailure, "no stabilizing seed gain found");
  }

  Matrix P_prev;
  for (int it = 0; it < kKleinmanMaxIterations; ++it) {
    const LyapunovSolver solver(A - B * K);
    if (!solver.is_hurwitz())
      throw Error(ErrorCode::RiccatiFailure, "Kleinman iterate lost stability");
    Matrix P = solver.solve_observability(plant.Q() + K.transpose() * plant.R() * K);
    K = R_llt.solve(B.transpose() * P);
    if (it > 0 && (P - P_prev).norm() <= kKleinmanTol * std::max(1.0, P.norm())) return P;
    P_prev = std::move(P);
  }
  throw Error(ErrorCode::RiccatiFailure, "Kleinman iteration did not converge");
}

GainMatrix lqr_centralized(const LtiPlant& plant) {
  const Matrix P = solve_care(plant);
  return GainMatrix(plant.R().llt().solve(plant.B().transpose() * P), plant.partition());
}

}  // namespace linkguard
