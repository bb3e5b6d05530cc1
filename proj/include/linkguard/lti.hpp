#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace linkguard {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Real-part margin below which a closed loop counts as stable.
inline constexpr double kStabilityTol = 1e-9;

/// Address of a control block K_ij (0-based): controller row block `row`,
/// state column block `col`.
struct BlockIndex {
  int row = 0;
  int col = 0;

  auto operator<=>(const BlockIndex&) const = default;
};

/// Closed-loop H2 cost value: finite, or the +infinity sentinel used for
/// non-stabilizing gains. Optimizers test `is_finite()` and never do
/// arithmetic on the sentinel.
class Cost {
 public:
  static Cost finite(double v) { return Cost(true, v); }
  static Cost infinite() { return Cost(false, 0.0); }

  bool is_finite() const noexcept { return finite_; }
  double value() const;
  /// Finite value, or IEEE +inf for reporting.
  double as_double() const noexcept {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const Cost&, const Cost&) = default;
  friend std::partial_ordering operator<=>(const Cost& a, const Cost& b) {
    if (!a.finite_ && !b.finite_) return std::partial_ordering::equivalent;
    if (!a.finite_) return std::partial_ordering::greater;
    if (!b.finite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  Cost(bool finite, double v) : finite_(finite), value_(v) {}
  bool finite_;
  double value_;
};

/// Node-wise partition of K: row blocks are controller dimensions m_i,
/// column blocks are state dimensions n_j.
class BlockPartition {
 public:
  BlockPartition() = default;
  BlockPartition(std::vector<int> row_sizes, std::vector<int> col_sizes);

  /// Square partition with `nodes` nodes of `states` states and `inputs`
  /// inputs each.
  static BlockPartition uniform(int nodes, int inputs, int states);

  int block_rows() const { return static_cast<int>(row_sizes_.size()); }
  int block_cols() const { return static_cast<int>(col_sizes_.size()); }
  int inputs() const { return inputs_; }
  int states() const { return states_; }

  int row_size(int i) const { return row_sizes_.at(i); }
  int col_size(int j) const { return col_sizes_.at(j); }
  int row_offset(int i) const { return row_offsets_.at(i); }
  int col_offset(int j) const { return col_offsets_.at(j); }
  /// Element count m_i * n_j of block (i, j).
  int block_size(BlockIndex b) const { return row_size(b.row) * col_size(b.col); }
  bool contains(BlockIndex b) const {
    return b.row >= 0 && b.row < block_rows() && b.col >= 0 && b.col < block_cols();
  }

  const std::vector<int>& row_sizes() const { return row_sizes_; }
  const std::vector<int>& col_sizes() const { return col_sizes_; }

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
    return a.row_sizes_ == b.row_sizes_ && a.col_sizes_ == b.col_sizes_;
  }

 private:
  std::vector<int> row_sizes_;
  std::vector<int> col_sizes_;
  std::vector<int> row_offsets_;
  std::vector<int> col_offsets_;
  int inputs_ = 0;
  int states_ = 0;
};

/// Continuous-time plant  dx = A x + B u + W d  with LQR weights Q, R.
class LtiPlant {
 public:
  /// Validates dimensions against the partition, Q = Q^T >= 0 and
  /// R = R^T > 0. Stabilizability is not checked here (see
  /// `is_stabilizable`).
  LtiPlant(Matrix A, Matrix B, Matrix W, Matrix Q, Matrix R, BlockPartition partition);

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& W() const { return W_; }
  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const BlockPartition& partition() const { return partition_; }

  int states() const { return static_cast<int>(A_.rows()); }
  int inputs() const { return static_cast<int>(B_.cols()); }
  int disturbances() const { return static_cast<int>(W_.cols()); }

  /// Performance output maps: C = [Q^{1/2}; 0], D = [0; R^{1/2}].
  Matrix C() const;
  Matrix D() const;

  friend bool operator==(const LtiPlant& a, const LtiPlant& b);

 private:
  Matrix A_, B_, W_, Q_, R_;
  BlockPartition partition_;
};

/// PBH test on the eigenvalues of A with real part >= -tol.
bool is_stabilizable(const Matrix& A, const Matrix& B, double tol = kStabilityTol);
bool is_detectable(const Matrix& A, const Matrix& C, double tol = kStabilityTol);

class GainMatrix {
 public:
  GainMatrix(Matrix K, BlockPartition partition);
  static GainMatrix zero(const BlockPartition& partition);

  const Matrix& matrix() const { return K_; }
  Matrix& matrix() { return K_; }
  const BlockPartition& partition() const { return partition_; }

  Matrix block(BlockIndex b) const;
  void set_block(BlockIndex b, const Matrix& value);

 private:
  Matrix K_;
  BlockPartition partition_;
};

/// Frobenius norm of every block K_ij.
Matrix block_frobenius(const GainMatrix& K);

/// Boolean block mask; true marks a free block.
class SparsityPattern {
 public:
  explicit SparsityPattern(BlockPartition partition, bool free = false);

  static SparsityPattern full(const BlockPartition& p) { return SparsityPattern(p, true); }
  static SparsityPattern empty(const BlockPartition& p) { return SparsityPattern(p, false); }
  /// Blocks whose Frobenius norm reaches `threshold` are free.
  static SparsityPattern from_gain(const GainMatrix& K, double threshold);

  const BlockPartition& partition() const { return partition_; }
  bool is_free(BlockIndex b) const;
  void set_free(BlockIndex b, bool free);
  int free_count() const;
  std::vector<BlockIndex> free_blocks() const;

  /// Entrywise 0/1 expansion I_Omega (m x n).
  Matrix structural_identity() const;
  /// 1 - I_Omega.
  Matrix complement_identity() const;

  bool is_subset_of(const SparsityPattern& other) const;

  friend bool operator==(const SparsityPattern& a, const SparsityPattern& b) {
    return a.partition_ == b.partition_ && a.mask_ == b.mask_;
  }

 private:
  BlockPartition partition_;
  std::vector<std::uint8_t> mask_;  // row-major over blocks
};

}  // namespace linkguard
