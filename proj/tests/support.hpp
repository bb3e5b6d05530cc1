#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "linkguard/h2.hpp"
#include "linkguard/lti.hpp"
#include "linkguard/prioritization.hpp"
#include "linkguard/scenario.hpp"

namespace testing_support {

using linkguard::BlockIndex;
using linkguard::BlockPartition;
using linkguard::GainMatrix;
using linkguard::LtiPlant;
using linkguard::Matrix;
using linkguard::PriorityRow;
using linkguard::PriorityTable;

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = u(rng);
  return M;
}

// Random Hurwitz matrix with spectral abscissa at -margin.
inline Matrix random_hurwitz(std::mt19937_64& rng, int n, double margin = 0.2) {
  Matrix M = random_matrix(rng, n, n);
  const double top = Eigen::EigenSolver<Matrix>(M, false).eigenvalues().real().maxCoeff();
  return M - (top + margin) * Matrix::Identity(n, n);
}

inline Matrix random_spd(std::mt19937_64& rng, int n, double floor = 0.5) {
  const Matrix G = random_matrix(rng, n, n);
  return G * G.transpose() + floor * Matrix::Identity(n, n);
}

// Dense plant with `nodes` subsystems, possibly open-loop unstable.
inline LtiPlant random_plant(std::mt19937_64& rng, int nodes, int states, int inputs, double shift = 0.0) {
  const int n = nodes * states;
  const int m = nodes * inputs;
  Matrix A = random_hurwitz(rng, n, 0.2) + shift * Matrix::Identity(n, n);
  return LtiPlant(A, random_matrix(rng, n, m), random_matrix(rng, n, n), random_spd(rng, n, 0.5),
                  random_spd(rng, m, 1.0), BlockPartition::uniform(nodes, inputs, states));
}

// Oracle for A^T P + P A + Q = 0: dense Kronecker-vec solve, independent of
// the Schur-based solver.
inline Matrix kron_lyapunov(const Matrix& A, const Matrix& Q) {
  const auto n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  Matrix L = Matrix::Zero(n * n, n * n);
  // vec(A^T P) = (I kron A^T) vec P, vec(P A) = (A^T kron I) vec P.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += I(i, j) * A.transpose();
      L.block(i * n, j * n, n, n) += A(j, i) * I;
    }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  const Eigen::VectorXd x = L.fullPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

// Central finite differences of a scalar function of a matrix.
inline Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& X, double h = 1e-5) {
  Matrix G(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r)
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      Matrix Xp = X, Xm = X;
      Xp(r, c) += h;
      Xm(r, c) -= h;
      G(r, c) = (f(Xp) - f(Xm)) / (2.0 * h);
    }
  return G;
}

inline PriorityRow row(int i, int j, int q, std::vector<double> values) {
  const int s = static_cast<int>(values.size());
  return PriorityRow{{i, j}, q, s, std::move(values)};
}

// 4 x 8 gain in 1 x 2 blocks, nine non-zero blocks ranked as in the first
// worked example of the rerouting scheme.
inline BlockPartition example1_partition() { return BlockPartition({1, 1, 1, 1}, {2, 2, 2, 2}); }

inline PriorityTable example1_table() {
  return PriorityTable({row(0, 0, 1, {3, 1}), row(3, 0, 2, {2, 4}), row(1, 1, 3, {1, 5}),
                        row(2, 1, 4, {5, 1}), row(3, 1, 5, {6, 8}), row(0, 2, 6, {7, 9}),
                        row(0, 3, 7, {3, 2}), row(1, 3, 8, {1, 2}), row(3, 3, 9, {5, 3})});
}

inline Matrix example1_gain() {
  Matrix K(4, 8);
  K << 3, 1, 0, 0, 7, 9, 3, 2,
       0, 0, 1, 5, 0, 0, 1, 2,
       0, 0, 5, 1, 0, 0, 0, 0,
       2, 4, 6, 8, 0, 0, 5, 3;
  return K;
}

// 4 x 14 gain with column blocks of 2, 4, 4, 4 states; block sizes 2 and 4.
inline BlockPartition example2_partition() { return BlockPartition({1, 1, 1, 1}, {2, 4, 4, 4}); }

inline PriorityTable example2_table() {
  return PriorityTable({row(0, 0, 1, {2, 1}), row(2, 0, 2, {1, 5}), row(3, 0, 3, {3, 5}),
                        row(0, 1, 4, {3, 7, 5, 8}), row(1, 2, 5, {3, 1, 3, 6}),
                        row(2, 3, 6, {7, 2, 6, 4})});
}

// Uniform-size table of r1 rows of `size` units on a 1 x r1 block strip.
inline PriorityTable strip_table(int r1, int size) {
  std::vector<PriorityRow> rows;
  for (int k = 0; k < r1; ++k) rows.push_back(row(0, k, k + 1, std::vector<double>(size, 1.0 + k)));
  return PriorityTable(std::move(rows));
}

inline BlockPartition strip_partition(int r1, int size) {
  return BlockPartition({1}, std::vector<int>(r1, size));
}

}  // namespace testing_support
