#include "linkguard/lti.hpp"

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>

#include "linkguard/error.hpp"

namespace linkguard {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, what);
}

bool symmetric(const Matrix& M) {
  return (M - M.transpose()).norm() <= 1e-12 * (1.0 + M.norm());
}

Matrix psd_sqrt(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// rank of [lambda I - A ; other] or [lambda I - A, other] over C.
bool pbh_full_rank(const Matrix& A, const Matrix& other, bool stack_rows, double tol) {
  const Eigen::Index n = A.rows();
  Eigen::EigenSolver<Matrix> es(A, false);
  const double scale = std::max(1.0, A.norm() + other.norm());
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<double> lambda = es.eigenvalues()(k);
    if (lambda.real() < -tol) continue;
    Eigen::MatrixXcd shifted = -A.cast<std::complex<double>>();
    shifted.diagonal().array() += lambda;
    Eigen::MatrixXcd M;
    if (stack_rows) {
      M.resize(n + other.rows(), n);
      M << shifted, other.cast<std::complex<double>>();
    } else {
      M.resize(n, n + other.cols());
      M << shifted, other.cast<std::complex<double>>();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    if (svd.singularValues()(n - 1) <= 1e-9 * scale) return false;
  }
  return true;
}

}  // namespace

double Cost::value() const {
  if (!finite_) throw Error(ErrorCode::NotStabilizing, "cost is +infinity");
  return value_;
}

BlockPartition::BlockPartition(std::vector<int> row_sizes, std::vector<int> col_sizes)
    : row_sizes_(std::move(row_sizes)), col_sizes_(std::move(col_sizes)) {
  if (row_sizes_.empty() || col_sizes_.empty())
    throw Error(ErrorCode::InvalidInput, "partition needs at least one row and column block");
  auto positive = [](int s) { return s > 0; };
  if (!std::all_of(row_sizes_.begin(), row_sizes_.end(), positive) ||
      !std::all_of(col_sizes_.begin(), col_sizes_.end(), positive))
    throw Error(ErrorCode::InvalidInput, "block sizes must be positive");
  row_offsets_.resize(row_sizes_.size());
  col_offsets_.resize(col_sizes_.size());
  std::exclusive_scan(row_sizes_.begin(), row_sizes_.end(), row_offsets_.begin(), 0);
  std::exclusive_scan(col_sizes_.begin(), col_sizes_.end(), col_offsets_.begin(), 0);
  inputs_ = std::accumulate(row_sizes_.begin(), row_sizes_.end(), 0);
  states_ = std::accumulate(col_sizes_.begin(), col_sizes_.end(), 0);
}

BlockPartition BlockPartition::uniform(int nodes, int inputs, int states) {
  return BlockPartition(std::vector<int>(nodes, inputs), std::vector<int>(nodes, states));
}

LtiPlant::LtiPlant(Matrix A, Matrix B, Matrix W, Matrix Q, Matrix R, BlockPartition partition)
    : A_(std::move(A)), B_(std::move(B)), W_(std::move(W)), Q_(std::move(Q)), R_(std::move(R)),
      partition_(std::move(partition)) {
  const Eigen::Index n = A_.rows();
  const Eigen::Index m = B_.cols();
  require(A_.cols() == n, "A must be square");
  require(B_.rows() == n, "B must have n rows");
  require(W_.rows() == n, "W must have n rows");
  require(Q_.rows() == n && Q_.cols() == n, "Q must be n x n");
  require(R_.rows() == m && R_.cols() == m, "R must be m x m");
  require(partition_.states() == n, "column block sizes must sum to n");
  require(partition_.inputs() == m, "row block sizes must sum to m");
  if (!symmetric(Q_) || !symmetric(R_))
    throw Error(ErrorCode::InvalidInput, "Q and R must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eq(Q_, Eigen::EigenvaluesOnly);
  if (eq.eigenvalues().minCoeff() < -1e-10 * (1.0 + Q_.norm()))
    throw Error(ErrorCode::InvalidInput, "Q must be positive semidefinite");
  Eigen::SelfAdjointEigenSolver<Matrix> er(R_, Eigen::EigenvaluesOnly);
  if (er.eigenvalues().minCoeff() <= 1e-12 * (1.0 + R_.norm()))
    throw Error(ErrorCode::InvalidInput, "R must be positive definite");
}

Matrix LtiPlant::C() const {
  const Eigen::Index n = states(), m = inputs();
  Matrix C = Matrix::Zero(n + m, n);
  C.topRows(n) = psd_sqrt(Q_);
  return C;
}

Matrix LtiPlant::D() const {
  const Eigen::Index n = states(), m = inputs();
  Matrix D = Matrix::Zero(n + m, m);
  D.bottomRows(m) = psd_sqrt(R_);
  return D;
}

bool operator==(const LtiPlant& a, const LtiPlant& b) {
  return a.partition_ == b.partition_ && a.A_ == b.A_ && a.B_ == b.B_ && a.W_ == b.W_ &&
         a.Q_ == b.Q_ && a.R_ == b.R_;
}

bool is_stabilizable(const Matrix& A, const Matrix& B, double tol) {
  return pbh_full_rank(A, B, false, tol);
}

bool is_detectable(const Matrix& A, const Matrix& C, double tol) {
  return pbh_full_rank(A, C, true, tol);
}

GainMatrix::GainMatrix(Matrix K, BlockPartition partition)
    : K_(std::move(K)), partition_(std::move(partition)) {
  require(K_.rows() == partition_.inputs() && K_.cols() == partition_.states(),
          "gain must be m x n for its partition");
}

GainMatrix GainMatrix::zero(const BlockPartition& partition) {
  return GainMatrix(Matrix::Zero(partition.inputs(), partition.states()), partition);
}

Matrix GainMatrix::block(BlockIndex b) const {
  if (!partition_.contains(b)) throw Error(ErrorCode::IndexOutOfRange, "block index");
  return K_.block(partition_.row_offset(b.row), partition_.col_offset(b.col),
                  partition_.row_size(b.row), partition_.col_size(b.col));
}

void GainMatrix::set_block(BlockIndex b, const Matrix& value) {
  if (!partition_.contains(b)) throw Error(ErrorCode::IndexOutOfRange, "block index");
  require(value.rows() == partition_.row_size(b.row) && value.cols() == partition_.col_size(b.col),
          "block value shape");
  K_.block(partition_.row_offset(b.row), partition_.col_offset(b.col), value.rows(),
           value.cols()) = value;
}

Matrix block_frobenius(const GainMatrix& K) {
  const BlockPartition& p = K.partition();
  Matrix norms(p.block_rows(), p.block_cols());
  for (int i = 0; i < p.block_rows(); ++i)
    for (int j = 0; j < p.block_cols(); ++j)
      norms(i, j) = K.matrix()
                        .block(p.row_offset(i), p.col_offset(j), p.row_size(i), p.col_size(j))
                        .norm();
  return norms;
}

SparsityPattern::SparsityPattern(BlockPartition partition, bool free)
    : partition_(std::move(partition)),
      mask_(static_cast<std::size_t>(partition_.block_rows() * partition_.block_cols()),
            free ? 1 : 0) {}

SparsityPattern SparsityPattern::from_gain(const GainMatrix& K, double threshold) {
  SparsityPattern s(K.partition());
  const Matrix norms = block_frobenius(K);
  for (int i = 0; i < norms.rows(); ++i)
    for (int j = 0; j < norms.cols(); ++j) s.set_free({i, j}, norms(i, j) >= threshold);
  return s;
}

bool SparsityPattern::is_free(BlockIndex b) const {
  if (!partition_.contains(b)) throw Error(ErrorCode::IndexOutOfRange, "block index");
  return mask_[static_cast<std::size_t>(b.row * partition_.block_cols() + b.col)] != 0;
}

void SparsityPattern::set_free(BlockIndex b, bool free) {
  if (!partition_.contains(b)) throw Error(ErrorCode::IndexOutOfRange, "block index");
  mask_[static_cast<std::size_t>(b.row * partition_.block_cols() + b.col)] = free ? 1 : 0;
}

int SparsityPattern::free_count() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), 1));
}

std::vector<BlockIndex> SparsityPattern::free_blocks() const {
  std::vector<BlockIndex> out;
  for (int i = 0; i < partition_.block_rows(); ++i)
    for (int j = 0; j < partition_.block_cols(); ++j)
      if (is_free({i, j})) out.push_back({i, j});
  return out;
}

Matrix SparsityPattern::structural_identity() const {
  Matrix I = Matrix::Zero(partition_.inputs(), partition_.states());
  for (const BlockIndex& b : free_blocks())
    I.block(partition_.row_offset(b.row), partition_.col_offset(b.col),
            partition_.row_size(b.row), partition_.col_size(b.col))
        .setOnes();
  return I;
}

Matrix SparsityPattern::complement_identity() const {
  return Matrix::Ones(partition_.inputs(), partition_.states()) - structural_identity();
}

bool SparsityPattern::is_subset_of(const SparsityPattern& other) const {
  if (!(partition_ == other.partition_)) return false;
  for (std::size_t k = 0; k < mask_.size(); ++k)
    if (mask_[k] && !other.mask_[k]) return false;
  return true;
}

}  // namespace linkguard
