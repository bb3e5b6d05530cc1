#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linkguard/prioritization.hpp"

namespace linkguard {

/// Attacked rows of a priority table, indexed by priority.
class AttackScenario {
 public:
  AttackScenario() = default;
  /// Multiple-link attack on the given priorities (1-based).
  static AttackScenario on_priorities(std::vector<int> priorities);
  /// Single-link attack on priority `r_attack`.
  static AttackScenario single(int r_attack);
  /// The `count` highest priorities of a table with `r1` rows.
  static AttackScenario top(int r1, int count);

  bool is_single() const { return single_; }
  /// Sorted ascending, unique.
  const std::vector<int>& priorities() const { return priorities_; }
  /// p_attack as a boolean vector of length r1. Throws IndexOutOfRange.
  std::vector<bool> mask(int r1) const;

  friend bool operator==(const AttackScenario&, const AttackScenario&) = default;

 private:
  std::vector<int> priorities_;
  bool single_ = false;
};

enum class RerouteAlgorithm { Uniform, Single, Multi };

const char* to_string(RerouteAlgorithm a);

struct RerouteOutcome {
  explicit RerouteOutcome(PriorityTable table) : n_final(std::move(table)) {}

  PriorityTable n_final;
  /// Priorities, each sorted ascending.
  std::vector<int> sacrificed;
  std::vector<int> rerouted;
  std::vector<int> dropped;
  bool feasible = true;
  RerouteAlgorithm algorithm = RerouteAlgorithm::Uniform;
  std::vector<std::string> warnings;

  /// Sacrificed host priorities carrying each rerouted priority.
  std::vector<std::pair<int, std::vector<int>>> hosts;

  friend bool operator==(const RerouteOutcome&, const RerouteOutcome&) = default;
};

/// Equal-size blocks: the j-th highest attacked priority is paired with the
/// j-th lowest free non-attacked host and rerouted iff its priority exceeds
/// the host's; otherwise dropped. Infeasible when more than half of the rows
/// are attacked. Throws InvalidAssumption for unequal sizes.
RerouteOutcome reroute_uniform(const PriorityTable& table, const std::vector<bool>& p_attack);

/// Unequal sizes, one attacked link: hosts are sacrificed from the lowest
/// priority up until their capacity covers the attacked block's size.
/// Throws IndexOutOfRange.
RerouteOutcome reroute_single(const PriorityTable& table, int r_attack);

/// Unequal sizes, several attacked links, processed from the highest
/// attacked priority down; hosts are never reused.
RerouteOutcome reroute_multi(const PriorityTable& table, const std::vector<bool>& p_attack);

/// Picks Uniform for equal sizes, Single for one attacked link, Multi otherwise.
RerouteOutcome reroute(const PriorityTable& table, const AttackScenario& attack);

/// Post-attack pattern: the table's blocks minus sacrificed and dropped
/// ones. Throws InfeasibleOutcome.
SparsityPattern pattern_from(const RerouteOutcome& outcome, const BlockPartition& partition);

}  // namespace linkguard
