// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails or overruns its time budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"
#include "linkguard/lyapunov.hpp"
#include "linkguard/prioritization.hpp"
#include "linkguard/render.hpp"
#include "linkguard/rerouting.hpp"
#include "linkguard/scenario.hpp"
#include "linkguard/serialization.hpp"
#include "linkguard/sparse_synthesis.hpp"
#include "linkguard/structured_h2.hpp"
#include "support.hpp"

using namespace linkguard;
using namespace testing_support;

namespace {

// Collects failed sub-checks of one criterion.
struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failed_criteria = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<std::string(Checker&)>& body) {
  Checker c;
  std::string summary;
  const auto start = std::chrono::steady_clock::now();
  try {
    summary = body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && elapsed > budget_s)
    c.failures.push_back("took " + fmt(elapsed) + " s, budget " + fmt(budget_s) + " s");
  const bool ok = c.failures.empty();
  if (!ok) ++failed_criteria;
  std::printf("[%s] %2d %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", id, title.c_str(), elapsed,
              summary.empty() ? "" : ": ", summary.c_str());
  const std::size_t shown = std::min<std::size_t>(c.failures.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) std::printf("       - %s\n", c.failures[k].c_str());
  if (c.failures.size() > shown) std::printf("       - ... %zu more\n", c.failures.size() - shown);
  std::fflush(stdout);
}

std::vector<std::vector<double>> final_values(const RerouteOutcome& o) {
  std::vector<std::vector<double>> v;
  for (const auto& r : o.n_final.rows()) v.push_back(r.values);
  return v;
}

SparsityPattern diagonal_pattern(const BlockPartition& p) {
  SparsityPattern s(p);
  for (int i = 0; i < std::min(p.block_rows(), p.block_cols()); ++i) s.set_free({i, i}, true);
  return s;
}

// Structured optimality conditions; returns the failures.
void check_structured(Checker& c, const std::string& tag, const LtiPlant& plant, const SparsityPattern& pattern,
                      const StructuredResult& r) {
  const Matrix& K = r.gain.matrix();
  c.expect(K.cwiseProduct(pattern.complement_identity()).norm() == 0.0, tag + ": non-zero off-pattern entries");
  c.expect(is_stabilizing(plant, r.gain), tag + ": not stabilizing");
  const double g = cost_gradient(plant, r.gain).cwiseProduct(pattern.structural_identity()).norm();
  c.expect(g <= 1e-5 * (1.0 + K.norm()), tag + ": structured gradient " + fmt(g));
}

}  // namespace

int main() {
  criterion(1, "uniform rerouting on the first worked example", 1e-3, [](Checker& c) {
    const PriorityTable table = example1_table();
    const auto start = std::chrono::steady_clock::now();
    const RerouteOutcome o = reroute_uniform(table, AttackScenario::on_priorities({3, 7, 8}).mask(9));
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    const std::vector<std::vector<double>> expected = {{0, 0}, {0, 0}, {0, 0}, {5, 1}, {6, 8},
                                                       {7, 9}, {3, 2}, {1, 2}, {5, 3}};
    c.expect(o.feasible, "infeasible");
    c.expect(final_values(o) == expected, "N_final differs");
    c.expect(o.rerouted == std::vector<int>{7, 8}, "rerouted set");
    c.expect(o.dropped == std::vector<int>{3}, "dropped set");
    c.expect(o.sacrificed == std::vector<int>{1, 2}, "sacrificed set");
    return "reroute " + fmt(us) + " us";
  });

  criterion(2, "multi-link rerouting on the second worked example", 1e-3, [](Checker& c) {
    const RerouteOutcome o = reroute_multi(example2_table(), AttackScenario::on_priorities({5}).mask(6));
    const std::vector<std::vector<double>> expected = {{0, 0},       {0, 0},       {3, 5},
                                                       {3, 7, 5, 8}, {3, 1, 3, 6}, {7, 2, 6, 4}};
    c.expect(o.feasible, "infeasible");
    c.expect(final_values(o) == expected, "N_final differs");
    c.expect(o.sacrificed == std::vector<int>{1, 2}, "sacrificed set");
    c.expect(o.rerouted == std::vector<int>{5}, "rerouted set");
    return "";
  });

  criterion(3, "Lyapunov and Riccati solvers", 5.0, [](Checker& c) {
    std::mt19937_64 rng(2024);
    double worst_res = 0.0, worst_oracle = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 20;
      const Matrix A = random_hurwitz(rng, n, 0.1 + 0.05 * (trial % 7));
      const Matrix Q = random_spd(rng, n, 0.5);
      const Matrix P = solve_lyapunov(A, Q);
      const double res = (A.transpose() * P + P * A + Q).norm();
      const Matrix Pk = kron_lyapunov(A, Q);
      const double rel = (P - Pk).norm() / Pk.norm();
      worst_res = std::max(worst_res, res);
      worst_oracle = std::max(worst_oracle, rel);
      c.expect(res <= 1e-8, "residual " + fmt(res) + " at n=" + std::to_string(n));
      c.expect(rel <= 1e-10, "oracle mismatch " + fmt(rel) + " at n=" + std::to_string(n));
    }
    const Matrix one = Matrix::Identity(1, 1);
    const LtiPlant integrator(Matrix::Zero(1, 1), one, one, one, one, BlockPartition({1}, {1}));
    const LtiPlant unstable(one, one, one, one, one, BlockPartition({1}, {1}));
    const double p0 = solve_care(integrator)(0, 0);
    const double p1 = solve_care(unstable)(0, 0);
    c.expect(std::abs(p0 - 1.0) <= 1e-10, "integrator P* " + fmt(p0));
    c.expect(std::abs(p1 - (1.0 + std::sqrt(2.0))) <= 1e-10, "unstable scalar P* " + fmt(p1));
    return "max residual " + fmt(worst_res) + ", max oracle gap " + fmt(worst_oracle);
  });

  criterion(4, "gradients against central finite differences", 10.0, [](Checker& c) {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int nodes = 1 + trial % 4;
      const LtiPlant plant = random_plant(rng, nodes, 2, 1, trial % 2 == 0 ? 0.0 : 0.4);
      const auto& part = plant.partition();
      GainMatrix K(lqr_centralized(plant).matrix() + 0.05 * random_matrix(rng, plant.inputs(), plant.states()), part);
      if (!is_stabilizing(plant, K)) K = lqr_centralized(plant);
      const std::string tag = "instance " + std::to_string(trial);

      const Matrix g = cost_gradient(plant, K);
      const Matrix fd = fd_gradient(
          [&](const Matrix& X) { return closed_loop_cost(plant, GainMatrix(X, part)).value(); }, K.matrix());
      const double e1 = (g - fd).norm() / fd.norm();
      c.expect(e1 <= 1e-4, tag + ": cost gradient error " + fmt(e1));

      const SparsityPattern s = diagonal_pattern(part);
      const Matrix lambda = random_matrix(rng, plant.inputs(), plant.states());
      const double gamma = 0.5 + trial;
      const Matrix ga = augmented_lagrangian_gradient(plant, K, lambda, gamma, s);
      const Matrix fda = fd_gradient(
          [&](const Matrix& X) { return augmented_lagrangian(plant, GainMatrix(X, part), lambda, gamma, s); },
          K.matrix());
      const double e2 = (ga - fda).norm() / fda.norm();
      c.expect(e2 <= 1e-4, tag + ": Lagrangian gradient error " + fmt(e2));
      worst = std::max({worst, e1, e2});
    }
    return "max relative error " + fmt(worst);
  });

  std::vector<std::tuple<LtiPlant, SparsityPattern, StructuredResult>> synthesized;

  criterion(5, "nested patterns order the structured optima", 120.0, [&](Checker& c) {
    std::mt19937_64 rng(5150);
    double worst = -1e300;
    for (int trial = 0; trial < 20; ++trial) {
      const int nodes = 2 + trial % 4;
      const LtiPlant plant = trial % 2 == 0 ? generate_plant(nodes, 100 + trial) : random_plant(rng, nodes, 2, 1);
      const auto& part = plant.partition();
      SparsityPattern big = diagonal_pattern(part);
      for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j)
          if (i != j && rng() % 2 == 0) big.set_free({i, j}, true);
      SparsityPattern small = big;
      for (const BlockIndex& b : big.free_blocks())
        if (b.row != b.col && rng() % 2 == 0) small.set_free(b, false);
      const StructuredResult rb = synthesize_structured(plant, big);
      const StructuredResult rs = synthesize_structured(plant, small);
      worst = std::max(worst, rb.cost - rs.cost);
      c.expect(rs.cost >= rb.cost - 1e-6, "pair " + std::to_string(trial) + ": J(S1)=" + fmt(rs.cost) +
                                              " < J(S2)=" + fmt(rb.cost));
      synthesized.emplace_back(plant, big, rb);
      synthesized.emplace_back(plant, small, rs);
    }
    return "max J(S2) - J(S1) = " + fmt(worst);
  });

  criterion(6, "structured synthesis optimality", 0.0, [&](Checker& c) {
    for (std::size_t k = 0; k < synthesized.size(); ++k) {
      const auto& [plant, pattern, r] = synthesized[k];
      check_structured(c, "pattern " + std::to_string(k), plant, pattern, r);
    }
    double full_gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const LtiPlant plant = generate_plant(3 + static_cast<int>(seed), seed);
      const SparsityPattern full = SparsityPattern::full(plant.partition());
      const StructuredResult r = synthesize_structured(plant, full);
      check_structured(c, "full pattern seed " + std::to_string(seed), plant, full, r);
      const Matrix Kc = lqr_centralized(plant).matrix();
      const double gap = (r.gain.matrix() - Kc).norm() / Kc.norm();
      full_gap = std::max(full_gap, gap);
      c.expect(gap <= 1e-5, "full pattern differs from LQR by " + fmt(gap));
    }
    std::mt19937_64 rng(31);
    double diag_gap = 0.0;
    for (int nodes = 2; nodes <= 4; ++nodes) {
      const int n = 2 * nodes;
      Matrix A = Matrix::Zero(n, n), B = Matrix::Zero(n, nodes), W = Matrix::Zero(n, n);
      Matrix Q = Matrix::Zero(n, n), R = Matrix::Zero(nodes, nodes);
      std::vector<Matrix> local;
      for (int i = 0; i < nodes; ++i) {
        const Matrix Ai = random_matrix(rng, 2, 2) + 0.3 * Matrix::Identity(2, 2);
        const Matrix Bi = random_matrix(rng, 2, 1);
        const Matrix Wi = random_matrix(rng, 2, 2);
        const Matrix Qi = random_spd(rng, 2, 0.5);
        const Matrix Ri = random_spd(rng, 1, 1.0);
        A.block(2 * i, 2 * i, 2, 2) = Ai;
        B.block(2 * i, i, 2, 1) = Bi;
        W.block(2 * i, 2 * i, 2, 2) = Wi;
        Q.block(2 * i, 2 * i, 2, 2) = Qi;
        R.block(i, i, 1, 1) = Ri;
        local.push_back(lqr_centralized(LtiPlant(Ai, Bi, Wi, Qi, Ri, BlockPartition({1}, {2}))).matrix());
      }
      const LtiPlant plant(A, B, W, Q, R, BlockPartition::uniform(nodes, 1, 2));
      const SparsityPattern s = diagonal_pattern(plant.partition());
      const StructuredResult r = synthesize_structured(plant, s);
      check_structured(c, "decoupled N=" + std::to_string(nodes), plant, s, r);
      for (int i = 0; i < nodes; ++i) {
        const double gap = (Matrix(r.gain.block({i, i})) - local[i]).norm() / local[i].norm();
        diag_gap = std::max(diag_gap, gap);
        c.expect(gap <= 1e-5, "decoupled block " + std::to_string(i) + " differs by " + fmt(gap));
      }
    }
    return std::to_string(synthesized.size()) + " patterns; full-pattern gap " + fmt(full_gap) +
           ", decoupled gap " + fmt(diag_gap);
  });

  criterion(7, "sparsity sweep footprint and cost trends", 600.0, [](Checker& c) {
    int steps = 0, worst_nonincreasing = 1 << 30, worst_steps = 0;
    double worst_drop = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const LtiPlant plant = generate_plant(10, seed);
      SparsityConfig config;
      config.beta_schedule = default_beta_schedule(closed_loop_cost(plant, lqr_centralized(plant)).value(), 30);
      const SweepResult sweep = sparsity_sweep(plant, config);
      const auto& e = sweep.entries;
      int ok = 0;
      for (std::size_t k = 1; k < e.size(); ++k) {
        ok += e[k].nnz_blocks <= e[k - 1].nnz_blocks;
        const double drop = e[k - 1].j_polished - e[k].j_polished;
        worst_drop = std::max(worst_drop, drop);
        c.expect(drop <= 1e-6, "seed " + std::to_string(seed) + " step " + std::to_string(k) +
                                   ": polished J decreased by " + fmt(drop));
      }
      const int n = static_cast<int>(e.size()) - 1;
      steps += n;
      if (ok * worst_steps < worst_nonincreasing * n || worst_steps == 0) {
        worst_nonincreasing = ok;
        worst_steps = n;
      }
      c.expect(10 * ok >= 9 * n, "seed " + std::to_string(seed) + ": footprint non-increasing in " +
                                     std::to_string(ok) + "/" + std::to_string(n) + " steps");
    }
    return "worst seed " + std::to_string(worst_nonincreasing) + "/" + std::to_string(worst_steps) +
           " non-increasing steps, max polished-J drop " + fmt(worst_drop);
  });

  criterion(8, "pipeline cost ordering under a top-quartile attack", 900.0, [](Checker& c) {
    int feasible = 0, finite = 0, recovered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Scenario s;
      s.name = "seed" + std::to_string(seed);
      s.generator = GeneratorSpec{};
      s.generator->seed = seed;
      const CostReport r = run_pipeline(s).report;
      if (!r.feasible || !r.j_reroute) continue;
      ++feasible;
      c.expect(r.j_before <= *r.j_reroute + 1e-9,
               s.name + ": j_before " + fmt(r.j_before) + " > j_reroute " + fmt(*r.j_reroute));
      if (r.j_attack.is_finite()) {
        ++finite;
        recovered += *r.j_reroute <= r.j_attack.value();
      }
    }
    c.expect(feasible > 0, "no feasible run");
    c.expect(5 * recovered >= 4 * finite, "j_reroute <= j_attack in only " + std::to_string(recovered) + "/" +
                                              std::to_string(finite) + " runs");
    return std::to_string(feasible) + "/20 feasible, rerouting recovered cost in " + std::to_string(recovered) +
           "/" + std::to_string(finite) + " finite-attack runs";
  });

  criterion(9, "large uniform tables reroute and render consistently", 60.0, [](Checker& c) {
    std::ostringstream summary;
    for (auto [r1, size, attacked] : {std::tuple{50, 4, 22}, std::tuple{100, 2, 48}}) {
      const std::string tag = std::to_string(r1) + "x" + std::to_string(size);
      const PriorityTable t = strip_table(r1, size);
      const BlockPartition p = strip_partition(r1, size);
      const AttackScenario attack = AttackScenario::top(r1, attacked);
      const RerouteOutcome o = reroute(t, attack);
      c.expect(o.feasible, tag + ": infeasible");
      const BlockGrid pre = attacked_grid(t, attack, p);
      const BlockGrid post = outcome_grid(o, p);
      c.expect(pre.count(BlockState::Attacked) == attacked, tag + ": attacked count in pre-reroute grid");
      const int shown = post.count(BlockState::Rerouted) + post.count(BlockState::Attacked);
      c.expect(shown == attacked, tag + ": attacked count in post-reroute grid");
      c.expect(post.count(BlockState::Sacrificed) == static_cast<int>(o.sacrificed.size()),
               tag + ": sacrificed count in post-reroute grid");
      int capacity = 0, rerouted_units = 0;
      for (int q : o.sacrificed) capacity += t.at_priority(q).size;
      for (int q : o.rerouted) rerouted_units += t.at_priority(q).size;
      c.expect(capacity >= rerouted_units, tag + ": sacrificed capacity below rerouted units");
      c.expect(!render_text(post).empty() && !render_svg(post).empty(), tag + ": empty render");
      summary << tag << " rerouted " << o.rerouted.size() << " sacrificed " << o.sacrificed.size() << "; ";
    }
    return summary.str();
  });

  criterion(10, "determinism and JSON round trips", 0.0, [](Checker& c) {
    Scenario s;
    s.name = "determinism";
    s.generator = GeneratorSpec{};
    s.generator->nodes = 6;
    s.generator->seed = 11;
    const PipelineResult a = run_pipeline(s);
    const PipelineResult b = run_pipeline(s);
    c.expect(a.artifacts == b.artifacts, "artifacts differ between identical runs");
    c.expect(report_csv_row(a.report) == report_csv_row(b.report), "report differs");

    const LtiPlant plant = s.resolve_plant();
    c.expect(plant_from_json(Json::parse(plant_to_json(plant).dump())) == plant, "plant round trip");
    for (const PriorityTable& t : {a.table, example1_table(), example2_table()})
      c.expect(table_from_json(Json::parse(table_to_json(t).dump())) == t, "table round trip");
    for (const RerouteOutcome& o :
         {a.outcome, reroute(example1_table(), AttackScenario::on_priorities({3, 7, 8})),
          reroute(example2_table(), AttackScenario::single(5))})
      c.expect(outcome_from_json(Json::parse(outcome_to_json(o).dump())) == o, "outcome round trip");
    return std::to_string(a.artifacts.size()) + " artifacts compared";
  });

  std::printf("%d of 10 criteria failed\n", failed_criteria);
  return failed_criteria == 0 ? 0 : 1;
}
