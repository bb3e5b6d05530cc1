#include "linkguard/rerouting.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "linkguard/error.hpp"

namespace linkguard {

namespace {

std::vector<int> attacked_priorities(const PriorityTable& table, const std::vector<bool>& p_attack) {
  if (static_cast<int>(p_attack.size()) != table.count())
    throw Error(ErrorCode::DimensionMismatch, "attack vector length must equal r1");
  std::vector<int> out;
  for (int k = 0; k < table.count(); ++k)
    if (p_attack[static_cast<std::size_t>(k)]) out.push_back(k + 1);
  return out;
}

// Zeroes the rows of sacrificed and dropped priorities and sorts the sets.
RerouteOutcome finish(const PriorityTable& table, RerouteOutcome out) {
  out.n_final = table;
  for (int q : out.sacrificed) {
    auto& v = out.n_final.at_priority(q).values;
    std::fill(v.begin(), v.end(), 0.0);
  }
  for (int q : out.dropped) {
    auto& v = out.n_final.at_priority(q).values;
    std::fill(v.begin(), v.end(), 0.0);
  }
  std::sort(out.sacrificed.begin(), out.sacrificed.end());
  std::sort(out.rerouted.begin(), out.rerouted.end());
  std::sort(out.dropped.begin(), out.dropped.end());
  std::sort(out.hosts.begin(), out.hosts.end());
  return out;
}

RerouteOutcome unchanged(const PriorityTable& table, RerouteAlgorithm algorithm, bool feasible) {
  RerouteOutcome out{table};
  out.algorithm = algorithm;
  out.feasible = feasible;
  return out;
}

// Sacrifices available hosts with priority below `attacked`, lowest first,
// until their capacity covers the attacked block. Returns false (and leaves
// `available` untouched) when the capacity below `attacked` is insufficient.
bool host_on_lower_links(const PriorityTable& table, int attacked, std::set<int>& available,
                         RerouteOutcome& out) {
  int need = table.at_priority(attacked).size;
  int capacity = 0;
  for (int k : available)
    if (k < attacked) capacity += table.at_priority(k).size;
  if (capacity < need) return false;
  std::vector<int> used;
  while (need > 0) {
    const int k = *available.begin();
    available.erase(available.begin());
    used.push_back(k);
    out.sacrificed.push_back(k);
    need -= table.at_priority(k).size;
  }
  out.rerouted.push_back(attacked);
  out.hosts.emplace_back(attacked, std::move(used));
  return true;
}

}  // namespace

AttackScenario AttackScenario::on_priorities(std::vector<int> priorities) {
  AttackScenario a;
  std::sort(priorities.begin(), priorities.end());
  priorities.erase(std::unique(priorities.begin(), priorities.end()), priorities.end());
  a.priorities_ = std::move(priorities);
  return a;
}

AttackScenario AttackScenario::single(int r_attack) {
  AttackScenario a;
  a.priorities_ = {r_attack};
  a.single_ = true;
  return a;
}

AttackScenario AttackScenario::top(int r1, int count) {
  if (count < 0 || count > r1) throw Error(ErrorCode::IndexOutOfRange, "attack count");
  std::vector<int> p(static_cast<std::size_t>(count));
  std::iota(p.begin(), p.end(), r1 - count + 1);
  return on_priorities(std::move(p));
}

std::vector<bool> AttackScenario::mask(int r1) const {
  std::vector<bool> m(static_cast<std::size_t>(r1), false);
  for (int q : priorities_) {
    if (q < 1 || q > r1) throw Error(ErrorCode::IndexOutOfRange, "attacked priority " + std::to_string(q));
    m[static_cast<std::size_t>(q - 1)] = true;
  }
  return m;
}

const char* to_string(RerouteAlgorithm a) {
  switch (a) {
    case RerouteAlgorithm::Uniform: return "uniform";
    case RerouteAlgorithm::Single: return "single";
    case RerouteAlgorithm::Multi: return "multi";
  }
  return "unknown";
}

RerouteOutcome reroute_uniform(const PriorityTable& table, const std::vector<bool>& p_attack) {
  if (!table.uniform_sizes())
    throw Error(ErrorCode::InvalidAssumption, "uniform rerouting needs equal block sizes");
  const std::vector<int> attacked = attacked_priorities(table, p_attack);
  const int r1 = table.count();
  const int r3 = static_cast<int>(attacked.size());
  if (r3 == 0) return unchanged(table, RerouteAlgorithm::Uniform, true);
  if (2 * r3 > r1) return unchanged(table, RerouteAlgorithm::Uniform, false);

  std::vector<int> hosts;
  for (int k = 1; k <= r1; ++k)
    if (!p_attack[static_cast<std::size_t>(k - 1)]) hosts.push_back(k);

  RerouteOutcome out{table};
  out.algorithm = RerouteAlgorithm::Uniform;
  std::size_t next_host = 0;
  for (auto it = attacked.rbegin(); it != attacked.rend(); ++it) {
    const int a = *it;
    if (next_host < hosts.size() && a > hosts[next_host]) {
      out.sacrificed.push_back(hosts[next_host]);
      out.rerouted.push_back(a);
      out.hosts.push_back({a, {hosts[next_host]}});
      ++next_host;
    } else {
      out.dropped.push_back(a);
    }
  }
  return finish(table, std::move(out));
}

RerouteOutcome reroute_single(const PriorityTable& table, int r_attack) {
  if (r_attack < 1 || r_attack > table.count())
    throw Error(ErrorCode::IndexOutOfRange, "attacked priority " + std::to_string(r_attack));
  RerouteOutcome out{table};
  out.algorithm = RerouteAlgorithm::Single;
  if (r_attack == 1) {
    out.dropped.push_back(1);
    return finish(table, std::move(out));
  }
  std::set<int> available;
  for (int k = 1; k < r_attack; ++k) available.insert(k);
  if (!host_on_lower_links(table, r_attack, available, out)) out.dropped.push_back(r_attack);
  return finish(table, std::move(out));
}

RerouteOutcome reroute_multi(const PriorityTable& table, const std::vector<bool>& p_attack) {
  const std::vector<int> attacked = attacked_priorities(table, p_attack);
  const int r1 = table.count();
  const int r3 = static_cast<int>(attacked.size());

  int b1 = 0;
  for (int a : attacked) b1 += table.at_priority(a).size;
  if (b1 == 0) return unchanged(table, RerouteAlgorithm::Multi, true);

  const int highest = attacked.back();
  int b2 = 0;
  for (int k = 1; k < highest; ++k)
    if (!p_attack[static_cast<std::size_t>(k - 1)]) b2 += table.at_priority(k).size;

  RerouteOutcome out{table};
  out.algorithm = RerouteAlgorithm::Multi;

  if (b2 == 0 && 2 * r3 < r1) {
    for (int k = 1; k <= r3; ++k) {
      if (p_attack[static_cast<std::size_t>(k - 1)]) {
        out.dropped.push_back(k);
      } else {
        out.sacrificed.push_back(k);
        out.warnings.push_back("row " + std::to_string(k) +
                               " zeroed by the no-capacity branch is not attacked");
      }
    }
    for (int a : attacked) {
      if (a > r3) {
        out.dropped.push_back(a);
        out.warnings.push_back("attacked row " + std::to_string(a) + " lies above rows 1..r3");
      }
    }
    return finish(table, std::move(out));
  }
  if (b1 > b2 && 2 * r3 >= r1) return unchanged(table, RerouteAlgorithm::Multi, false);

  std::set<int> available;
  for (int k = 1; k <= r1; ++k)
    if (!p_attack[static_cast<std::size_t>(k - 1)]) available.insert(k);
  for (auto it = attacked.rbegin(); it != attacked.rend(); ++it)
    if (!host_on_lower_links(table, *it, available, out)) out.dropped.push_back(*it);
  return finish(table, std::move(out));
}

RerouteOutcome reroute(const PriorityTable& table, const AttackScenario& attack) {
  const std::vector<bool> mask = attack.mask(table.count());
  if (table.uniform_sizes()) return reroute_uniform(table, mask);
  if (attack.priorities().size() == 1) return reroute_single(table, attack.priorities().front());
  return reroute_multi(table, mask);
}

SparsityPattern pattern_from(const RerouteOutcome& outcome, const BlockPartition& partition) {
  if (!outcome.feasible)
    throw Error(ErrorCode::InfeasibleOutcome, "countermeasure can not be implemented");
  std::set<int> removed(outcome.sacrificed.begin(), outcome.sacrificed.end());
  removed.insert(outcome.dropped.begin(), outcome.dropped.end());
  SparsityPattern s = SparsityPattern::empty(partition);
  for (const PriorityRow& row : outcome.n_final.rows())
    if (!removed.count(row.priority)) s.set_free(row.block, true);
  return s;
}

}  // namespace linkguard
