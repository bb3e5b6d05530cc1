#pragma once

#include <vector>

#include "linkguard/lti.hpp"
#include "linkguard/sparse_synthesis.hpp"
#include "linkguard/structured_h2.hpp"

namespace linkguard {

/// One row of the priority table: a non-zero control block with its
/// priority q (1 = lowest) and size s in information units (m_i * n_j).
struct PriorityRow {
  BlockIndex block;
  int priority = 0;
  int size = 0;
  /// Row-major block entries, length `size`.
  std::vector<double> values;

  bool is_zero() const;
  friend bool operator==(const PriorityRow&, const PriorityRow&) = default;
};

/// Non-zero control blocks stacked in ascending priority. Row k holds
/// priority k + 1.
class PriorityTable {
 public:
  PriorityTable() = default;
  /// Rows may come in any order; priorities must form a permutation of
  /// 1..r1 and every size must match its value count.
  explicit PriorityTable(std::vector<PriorityRow> rows);

  /// Builds a table from `K` listing `order` from lowest to highest priority.
  static PriorityTable from_order(const GainMatrix& K, const std::vector<BlockIndex>& order);

  int count() const { return static_cast<int>(rows_.size()); }   // r1
  int width() const;                                               // r2
  const std::vector<PriorityRow>& rows() const { return rows_; }
  const PriorityRow& at_priority(int q) const;
  PriorityRow& at_priority(int q);
  std::vector<int> sizes() const;
  bool uniform_sizes() const;
  /// r1 x r2 matrix of values padded with zeros.
  Matrix padded() const;
  /// Pattern freeing exactly the blocks whose rows are non-zero.
  SparsityPattern pattern(const BlockPartition& partition) const;

  friend bool operator==(const PriorityTable&, const PriorityTable&) = default;

 private:
  std::vector<PriorityRow> rows_;
};

/// J*(base \ {block}) - J*(base), each J* from structured synthesis. The
/// result is Cost::infinite() when removing the block leaves no stabilizing
/// structured gain.
Cost delta_j(const LtiPlant& plant, const SparsityPattern& base, BlockIndex block,
             const AugLagConfig& config = {});

/// Offline ranking: blocks of the first sweep footprint get priorities by
/// the beta at which they first vanish (earliest = lowest priority). Ties
/// within one beta step and the blocks that never vanish are ordered by
/// delta_j ascending, then lexicographically by (row, col). Values come from
/// the first sweep entry's gain. Throws EmptySweep.
PriorityTable rank_links(const LtiPlant& plant, const SweepResult& sweep,
                         const AugLagConfig& config = {});

}  // namespace linkguard
