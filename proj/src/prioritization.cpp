#include "linkguard/prioritization.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"

namespace linkguard {

namespace {

struct StructuredOptimum {
  GainMatrix gain;
  double cost;
};

std::optional<StructuredOptimum> structured_optimum(const LtiPlant& plant,
                                                    const SparsityPattern& pattern,
                                                    const AugLagConfig& config,
                                                    const std::optional<GainMatrix>& warm) {
  try {
    StructuredResult r = warm ? synthesize_structured_warm(plant, pattern, config, *warm)
                              : synthesize_structured(plant, pattern, config);
    return StructuredOptimum{r.gain, r.cost};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PatternNotStabilizable) throw;
  }
  return std::nullopt;
}

Cost removal_loss(const LtiPlant& plant, const SparsityPattern& base, const StructuredOptimum& base_opt,
                  BlockIndex block, const AugLagConfig& config) {
  SparsityPattern reduced = base;
  reduced.set_free(block, false);
  const auto opt = structured_optimum(plant, reduced, config, base_opt.gain);
  if (!opt) return Cost::infinite();
  return Cost::finite(opt->cost - base_opt.cost);
}

}  // namespace

bool PriorityRow::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

PriorityTable::PriorityTable(std::vector<PriorityRow> rows) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(),
            [](const PriorityRow& a, const PriorityRow& b) { return a.priority < b.priority; });
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if (rows_[k].priority != static_cast<int>(k) + 1)
      throw Error(ErrorCode::InvalidInput, "priorities must be a permutation of 1..r1");
    if (rows_[k].size <= 0 || static_cast<int>(rows_[k].values.size()) != rows_[k].size)
      throw Error(ErrorCode::InvalidInput, "row size must equal its value count");
  }
}

PriorityTable PriorityTable::from_order(const GainMatrix& K, const std::vector<BlockIndex>& order) {
  std::vector<PriorityRow> rows;
  rows.reserve(order.size());
  int q = 1;
  for (const BlockIndex& b : order) {
    const Matrix block = K.block(b);
    PriorityRow row{b, q++, static_cast<int>(block.size()), {}};
    row.values.reserve(block.size());
    for (Eigen::Index r = 0; r < block.rows(); ++r)
      for (Eigen::Index c = 0; c < block.cols(); ++c) row.values.push_back(block(r, c));
    rows.push_back(std::move(row));
  }
  return PriorityTable(std::move(rows));
}

int PriorityTable::width() const {
  int w = 0;
  for (const auto& r : rows_) w = std::max(w, r.size);
  return w;
}

const PriorityRow& PriorityTable::at_priority(int q) const {
  if (q < 1 || q > count()) throw Error(ErrorCode::IndexOutOfRange, "priority " + std::to_string(q));
  return rows_[static_cast<std::size_t>(q - 1)];
}

PriorityRow& PriorityTable::at_priority(int q) {
  if (q < 1 || q > count()) throw Error(ErrorCode::IndexOutOfRange, "priority " + std::to_string(q));
  return rows_[static_cast<std::size_t>(q - 1)];
}

std::vector<int> PriorityTable::sizes() const {
  std::vector<int> s;
  s.reserve(rows_.size());
  for (const auto& r : rows_) s.push_back(r.size);
  return s;
}

bool PriorityTable::uniform_sizes() const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [&](const PriorityRow& r) { return r.size == rows_.front().size; });
}

Matrix PriorityTable::padded() const {
  Matrix N = Matrix::Zero(count(), width());
  for (int k = 0; k < count(); ++k)
    for (int c = 0; c < rows_[k].size; ++c) N(k, c) = rows_[k].values[c];
  return N;
}

SparsityPattern PriorityTable::pattern(const BlockPartition& partition) const {
  SparsityPattern s = SparsityPattern::empty(partition);
  for (const auto& r : rows_)
    if (!r.is_zero()) s.set_free(r.block, true);
  return s;
}

Cost delta_j(const LtiPlant& plant, const SparsityPattern& base, BlockIndex block,
             const AugLagConfig& config) {
  if (!base.is_free(block)) throw Error(ErrorCode::InvalidInput, "block is not free in the base pattern");
  const auto base_opt = structured_optimum(plant, base, config, std::nullopt);
  if (!base_opt) throw Error(ErrorCode::PatternNotStabilizable, "base pattern is not stabilizable");
  return removal_loss(plant, base, *base_opt, block, config);
}

PriorityTable rank_links(const LtiPlant& plant, const SweepResult& sweep, const AugLagConfig& config) {
  if (sweep.entries.empty()) throw Error(ErrorCode::EmptySweep, "rank_links needs a sweep");
  const auto& entries = sweep.entries;
  const std::vector<BlockIndex> universe = entries.front().pattern.free_blocks();

  // Group blocks by the first sweep step at which they are no longer free;
  // never-vanishing blocks go into the final group.
  const std::size_t never = entries.size();
  std::map<std::size_t, std::vector<BlockIndex>> groups;
  for (const BlockIndex& b : universe) {
    std::size_t step = never;
    for (std::size_t j = 1; j < entries.size(); ++j) {
      if (!entries[j].pattern.is_free(b)) {
        step = j;
        break;
      }
    }
    groups[step].push_back(b);
  }

  std::vector<BlockIndex> order;
  order.reserve(universe.size());
  for (auto& [step, blocks] : groups) {
    if (blocks.size() > 1) {
      // Tie-break by removal loss measured on the footprint the blocks left.
      const SweepEntry& base_entry = step == never ? entries.back() : entries[step - 1];
      const auto base_opt = structured_optimum(plant, base_entry.pattern, config, base_entry.polished);
      if (!base_opt)
        throw Error(ErrorCode::PatternNotStabilizable, "sweep footprint is not stabilizable");
      std::vector<std::pair<Cost, BlockIndex>> keyed;
      keyed.reserve(blocks.size());
      for (const BlockIndex& b : blocks)
        keyed.emplace_back(removal_loss(plant, base_entry.pattern, *base_opt, b, config), b);
      std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first < b.first) return true;
        if (b.first < a.first) return false;
        return a.second < b.second;
      });
      for (std::size_t k = 0; k < keyed.size(); ++k) blocks[k] = keyed[k].second;
    }
    order.insert(order.end(), blocks.begin(), blocks.end());
  }
  return PriorityTable::from_order(entries.front().gain, order);
}

}  // namespace linkguard
