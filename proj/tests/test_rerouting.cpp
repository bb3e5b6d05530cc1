#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "linkguard/error.hpp"
#include "linkguard/rerouting.hpp"
#include "support.hpp"

using namespace linkguard;
using namespace testing_support;

namespace {

std::vector<std::vector<double>> final_values(const RerouteOutcome& o) {
  std::vector<std::vector<double>> v;
  for (const auto& r : o.n_final.rows()) v.push_back(r.values);
  return v;
}

PriorityTable sized_table(const std::vector<int>& sizes) {
  std::vector<PriorityRow> rows;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    rows.push_back(row(0, static_cast<int>(k), static_cast<int>(k) + 1,
                       std::vector<double>(static_cast<std::size_t>(sizes[k]), 1.0 + k)));
  return PriorityTable(std::move(rows));
}

std::vector<bool> mask_of(int r1, std::initializer_list<int> attacked) {
  return AttackScenario::on_priorities(attacked).mask(r1);
}

// Capacity and host-reuse invariants shared by every algorithm.
void check_accounting(const PriorityTable& table, const std::vector<bool>& p_attack, const RerouteOutcome& o) {
  std::set<int> used;
  for (const auto& [attacked, hosts] : o.hosts) {
    CHECK(p_attack[static_cast<std::size_t>(attacked - 1)]);
    int capacity = 0;
    for (int h : hosts) {
      CHECK(used.insert(h).second);
      CHECK_FALSE(p_attack[static_cast<std::size_t>(h - 1)]);
      CHECK(h < attacked);
      capacity += table.at_priority(h).size;
    }
    CHECK(capacity >= table.at_priority(attacked).size);
  }
  std::set<int> rerouted(o.rerouted.begin(), o.rerouted.end());
  std::set<int> dropped(o.dropped.begin(), o.dropped.end());
  for (int q : rerouted) CHECK_FALSE(dropped.count(q));
  if (o.feasible) {
    int attacked = 0;
    for (bool b : p_attack) attacked += b;
    CHECK(static_cast<int>(rerouted.size() + dropped.size()) >= attacked);
  }
}

}  // namespace

TEST_CASE("attack scenarios") {
  const auto a = AttackScenario::on_priorities({8, 3, 7, 3});
  CHECK(a.priorities() == std::vector<int>{3, 7, 8});
  CHECK(a.mask(9) == std::vector<bool>{false, false, true, false, false, false, true, true, false});
  CHECK_THROWS_AS(a.mask(7), Error);
  CHECK(AttackScenario::top(10, 3).priorities() == std::vector<int>{8, 9, 10});
  CHECK(AttackScenario::single(4).is_single());
  CHECK(AttackScenario().mask(3) == std::vector<bool>(3, false));
}

TEST_CASE("uniform rerouting reproduces the first worked example") {
  const PriorityTable table = example1_table();
  const RerouteOutcome o = reroute_uniform(table, mask_of(9, {3, 7, 8}));
  CHECK(o.feasible);
  CHECK(o.rerouted == std::vector<int>{7, 8});
  CHECK(o.dropped == std::vector<int>{3});
  CHECK(o.sacrificed == std::vector<int>{1, 2});
  const std::vector<std::vector<double>> expected = {{0, 0}, {0, 0}, {0, 0}, {5, 1}, {6, 8},
                                                     {7, 9}, {3, 2}, {1, 2}, {5, 3}};
  CHECK(final_values(o) == expected);
  const auto hosts = std::vector<std::pair<int, std::vector<int>>>{{7, {2}}, {8, {1}}};
  CHECK(o.hosts == hosts);

  const SparsityPattern post = pattern_from(o, example1_partition());
  CHECK(post.free_count() == 6);
  for (int q = 4; q <= 9; ++q) CHECK(post.is_free(table.at_priority(q).block));
  CHECK(post.is_subset_of(table.pattern(example1_partition())));
}

TEST_CASE("uniform rerouting edge cases") {
  const PriorityTable table = example1_table();
  SUBCASE("no attack") {
    const RerouteOutcome o = reroute_uniform(table, std::vector<bool>(9, false));
    CHECK(o.feasible);
    CHECK(o.n_final == table);
    CHECK(o.sacrificed.empty());
    CHECK(o.rerouted.empty());
    CHECK(o.dropped.empty());
    CHECK(pattern_from(o, example1_partition()) == table.pattern(example1_partition()));
  }
  SUBCASE("more than half attacked") {
    const RerouteOutcome o = reroute_uniform(strip_table(4, 2), mask_of(4, {1, 2, 3}));
    CHECK_FALSE(o.feasible);
    CHECK(o.n_final == strip_table(4, 2));
    try {
      pattern_from(o, strip_partition(4, 2));
      FAIL("expected InfeasibleOutcome");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleOutcome);
    }
  }
  SUBCASE("exactly half attacked is still attempted") {
    const RerouteOutcome o = reroute_uniform(strip_table(4, 2), mask_of(4, {3, 4}));
    CHECK(o.feasible);
    CHECK(o.sacrificed == std::vector<int>{1, 2});
  }
  SUBCASE("unequal sizes") {
    try {
      reroute_uniform(example2_table(), std::vector<bool>(6, false));
      FAIL("expected InvalidAssumption");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidAssumption);
    }
  }
}

TEST_CASE("single-link rerouting reproduces the second worked example") {
  const RerouteOutcome o = reroute_single(example2_table(), 5);
  CHECK(o.feasible);
  CHECK(o.sacrificed == std::vector<int>{1, 2});
  CHECK(o.rerouted == std::vector<int>{5});
  CHECK(o.dropped.empty());
  const std::vector<std::vector<double>> expected = {{0, 0}, {0, 0}, {3, 5}, {3, 7, 5, 8}, {3, 1, 3, 6}, {7, 2, 6, 4}};
  CHECK(final_values(o) == expected);
}

TEST_CASE("single-link rerouting branches") {
  SUBCASE("lowest priority is dropped") {
    const RerouteOutcome o = reroute_single(example2_table(), 1);
    CHECK(o.dropped == std::vector<int>{1});
    CHECK(o.sacrificed.empty());
  }
  SUBCASE("over-provisioned host") {
    const RerouteOutcome o = reroute_single(sized_table({4, 2}), 2);
    CHECK(o.sacrificed == std::vector<int>{1});
    CHECK(o.rerouted == std::vector<int>{2});
  }
  SUBCASE("insufficient capacity drops") {
    const RerouteOutcome o = reroute_single(sized_table({2, 4}), 2);
    CHECK(o.dropped == std::vector<int>{2});
    CHECK(o.sacrificed.empty());
  }
  SUBCASE("out of range") { CHECK_THROWS_AS(reroute_single(example2_table(), 7), Error); }
}

TEST_CASE("multi-link rerouting") {
  SUBCASE("second worked example through the multi-link path") {
    const RerouteOutcome multi = reroute_multi(example2_table(), mask_of(6, {5}));
    const RerouteOutcome single = reroute_single(example2_table(), 5);
    CHECK(multi.n_final == single.n_final);
    CHECK(multi.sacrificed == single.sacrificed);
    CHECK(multi.rerouted == single.rerouted);
  }
  SUBCASE("no attack") {
    const RerouteOutcome o = reroute_multi(example2_table(), std::vector<bool>(6, false));
    CHECK(o.feasible);
    CHECK(o.n_final == example2_table());
  }
  SUBCASE("no spare capacity with half attacked") {
    const RerouteOutcome o = reroute_multi(sized_table({2, 2, 4}), mask_of(3, {1, 2}));
    CHECK_FALSE(o.feasible);
  }
  SUBCASE("no spare capacity with few attacked drops the lowest rows") {
    const RerouteOutcome o = reroute_multi(sized_table({2, 2, 4, 4, 4}), mask_of(5, {1, 2}));
    CHECK(o.feasible);
    CHECK(o.dropped == std::vector<int>{1, 2});
    CHECK(o.warnings.empty());
  }
  SUBCASE("hosts are never reused") {
    const PriorityTable t = sized_table({2, 2, 2, 4, 4, 4});
    const auto mask = mask_of(6, {5, 6});
    const RerouteOutcome o = reroute_multi(t, mask);
    CHECK(o.rerouted == std::vector<int>{5, 6});
    CHECK(o.dropped.empty());
    CHECK(o.sacrificed == std::vector<int>{1, 2, 3, 4});
    const auto hosts = std::vector<std::pair<int, std::vector<int>>>{{5, {3, 4}}, {6, {1, 2}}};
    CHECK(o.hosts == hosts);
    check_accounting(t, mask, o);
  }
}

TEST_CASE("dispatcher picks the algorithm") {
  CHECK(reroute(example1_table(), AttackScenario::on_priorities({3, 7, 8})).algorithm == RerouteAlgorithm::Uniform);
  CHECK(reroute(example2_table(), AttackScenario::single(5)).algorithm == RerouteAlgorithm::Single);
  CHECK(reroute(example2_table(), AttackScenario::on_priorities({5, 6})).algorithm == RerouteAlgorithm::Multi);
}

TEST_CASE("rerouting invariants on random tables") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int r1 = 2 + static_cast<int>(rng() % 12);
    const bool uniform = trial % 2 == 0;
    std::vector<int> sizes(static_cast<std::size_t>(r1));
    for (int& s : sizes) s = uniform ? 2 : 1 + static_cast<int>(rng() % 4);
    const PriorityTable t = sized_table(sizes);
    std::vector<bool> mask(static_cast<std::size_t>(r1));
    for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = rng() % 3 == 0;
    const RerouteOutcome o = uniform ? reroute_uniform(t, mask) : reroute_multi(t, mask);
    check_accounting(t, mask, o);
    if (uniform)
      for (const auto& [a, hosts] : o.hosts) CHECK(hosts.size() == 1);
    if (o.feasible) {
      const BlockPartition p({1}, sizes);
      CHECK(pattern_from(o, p).is_subset_of(t.pattern(p)));
    }
    // Deterministic for fixed inputs.
    CHECK((uniform ? reroute_uniform(t, mask) : reroute_multi(t, mask)) == o);
  }
}

TEST_CASE("large uniform tables reroute within the host budget") {
  for (auto [r1, size, attacked, budget] : {std::tuple{50, 4, 22, 28}, std::tuple{100, 2, 48, 52}}) {
    const PriorityTable t = strip_table(r1, size);
    const RerouteOutcome o = reroute(t, AttackScenario::top(r1, attacked));
    CHECK(o.feasible);
    CHECK(static_cast<int>(o.rerouted.size()) == attacked);
    CHECK(static_cast<int>(o.sacrificed.size()) <= budget);
    CHECK(static_cast<int>(o.sacrificed.size()) * size >= static_cast<int>(o.rerouted.size()) * size);
  }
}
