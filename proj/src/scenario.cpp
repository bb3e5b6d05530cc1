#include "linkguard/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include <Eigen/Eigenvalues>

#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"
#include "linkguard/render.hpp"

namespace linkguard {

namespace {

// Portable [0, 1) draw: the standard distributions are not bit-stable across
// library implementations.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

LtiPlant generate_plant(const GeneratorSpec& spec) {
  if (spec.nodes < 2 || spec.states_per_node < 1 || spec.inputs_per_node < 1)
    throw Error(ErrorCode::InvalidInput, "generator needs N >= 2 and positive block sizes");
  if (spec.inputs_per_node > spec.states_per_node)
    throw Error(ErrorCode::InvalidInput, "generator needs inputs_per_node <= states_per_node");
  if (!(spec.delta > 0.0)) throw Error(ErrorCode::InvalidInput, "generator needs delta > 0");

  const int n = spec.nodes * spec.states_per_node;
  const int m = spec.nodes * spec.inputs_per_node;
  std::mt19937_64 rng(spec.seed);
  Matrix M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) M(r, c) = unit_draw(rng);

  const double top = Eigen::EigenSolver<Matrix>(M, false).eigenvalues().real().maxCoeff();
  Matrix A = M - (top + spec.delta) * Matrix::Identity(n, n);

  Matrix B = Matrix::Zero(n, m);
  for (int i = 0; i < spec.nodes; ++i)
    B.block(i * spec.states_per_node, i * spec.inputs_per_node, spec.inputs_per_node,
            spec.inputs_per_node) = 10.0 * Matrix::Identity(spec.inputs_per_node, spec.inputs_per_node);

  return LtiPlant(std::move(A), std::move(B), 0.5 * Matrix::Identity(n, n), Matrix::Identity(n, n),
                  10.0 * Matrix::Identity(m, m),
                  BlockPartition::uniform(spec.nodes, spec.inputs_per_node, spec.states_per_node));
}

LtiPlant generate_plant(int nodes, std::uint64_t seed, double delta) {
  GeneratorSpec spec;
  spec.nodes = nodes;
  spec.seed = seed;
  spec.delta = delta;
  return generate_plant(spec);
}

AttackScenario AttackSpec::resolve(int r1) const {
  switch (kind) {
    case Kind::Explicit:
      return AttackScenario::on_priorities(priorities);
    case Kind::Single:
      if (priorities.size() != 1) throw Error(ErrorCode::InvalidInput, "single attack needs one priority");
      return AttackScenario::single(priorities.front());
    case Kind::TopCount:
      return AttackScenario::top(r1, count);
    case Kind::TopFraction:
      if (fraction < 0.0 || fraction > 1.0)
        throw Error(ErrorCode::InvalidInput, "attack fraction must lie in [0, 1]");
      return AttackScenario::top(r1, static_cast<int>(std::lround(fraction * r1)));
  }
  throw Error(ErrorCode::InvalidInput, "unknown attack kind");
}

LtiPlant Scenario::resolve_plant() const {
  if (plant) return *plant;
  if (generator) return generate_plant(*generator);
  throw Error(ErrorCode::InvalidInput, "scenario has neither a plant nor a generator");
}

Scenario scenario_from_json(const Json& j, const std::string& base_dir) {
  try {
    Scenario s;
    s.name = value_or<std::string>(j, "name", s.name);
    const std::filesystem::path base(base_dir);
    auto resolve_path = [&](const std::string& p) {
      const std::filesystem::path path(p);
      return (path.is_absolute() ? path : base / path).string();
    };

    if (j.contains("plant")) {
      s.plant = plant_from_json(j.at("plant"));
    } else if (j.contains("plant_file")) {
      s.plant = plant_from_json(read_json_file(resolve_path(j.at("plant_file").get<std::string>())));
    } else if (j.contains("generator")) {
      const Json& g = j.at("generator");
      if (!g.contains("seed")) throw Error(ErrorCode::InvalidInput, "generator needs an explicit seed");
      GeneratorSpec spec;
      spec.nodes = value_or(g, "N", spec.nodes);
      spec.states_per_node = value_or(g, "states_per_node", spec.states_per_node);
      spec.inputs_per_node = value_or(g, "inputs_per_node", spec.inputs_per_node);
      spec.seed = g.at("seed").get<std::uint64_t>();
      spec.delta = value_or(g, "delta", spec.delta);
      s.generator = spec;
    } else {
      throw Error(ErrorCode::InvalidInput, "scenario needs plant, plant_file or generator");
    }

    if (j.contains("sparsity")) {
      const Json& c = j.at("sparsity");
      s.sparsity.beta_schedule = value_or(c, "beta_schedule", std::vector<double>{});
      s.beta_points = value_or(c, "beta_points", s.beta_points);
      s.beta_lo_factor = value_or(c, "beta_lo_factor", s.beta_lo_factor);
      s.beta_hi_factor = value_or(c, "beta_hi_factor", s.beta_hi_factor);
      s.sparsity.epsilon_reweight = value_or(c, "epsilon_reweight", s.sparsity.epsilon_reweight);
      s.sparsity.zero_threshold = value_or(c, "zero_threshold", s.sparsity.zero_threshold);
      s.sparsity.max_reweight = value_or(c, "max_reweight", s.sparsity.max_reweight);
      s.sparsity.tolerance = value_or(c, "tolerance", s.sparsity.tolerance);
      s.sparsity.max_iterations = value_or(c, "max_iterations", s.sparsity.max_iterations);
    }

    if (j.contains("attack")) {
      const Json& a = j.at("attack");
      if (a.contains("attacked_priorities")) {
        s.attack.kind = AttackSpec::Kind::Explicit;
        s.attack.priorities = a.at("attacked_priorities").get<std::vector<int>>();
      } else if (a.contains("attacked_block")) {
        s.attack.kind = AttackSpec::Kind::Single;
        s.attack.priorities = {a.at("attacked_block").get<int>()};
      } else if (a.contains("top_count")) {
        s.attack.kind = AttackSpec::Kind::TopCount;
        s.attack.count = a.at("top_count").get<int>();
      } else if (a.contains("top_fraction")) {
        s.attack.kind = AttackSpec::Kind::TopFraction;
        s.attack.fraction = a.at("top_fraction").get<double>();
      } else {
        throw Error(ErrorCode::InvalidInput, "unrecognized attack specification");
      }
    }

    if (j.contains("synthesis")) {
      const Json& c = j.at("synthesis");
      s.synthesis.gamma0 = value_or(c, "gamma0", s.synthesis.gamma0);
      s.synthesis.alpha = value_or(c, "alpha", s.synthesis.alpha);
      s.synthesis.eps_stop = value_or(c, "eps_stop", s.synthesis.eps_stop);
      s.synthesis.max_outer = value_or(c, "max_outer", s.synthesis.max_outer);
      s.synthesis.validate();
    }
    s.sparsity.polish = s.synthesis;

    if (j.contains("output")) s.output_dir = resolve_path(j.at("output").get<std::string>());
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("scenario: ") + e.what());
  }
}

std::string report_csv_header() {
  return "scenario,j_before,j_attack,j_reroute,n_attacked,n_sacrificed,n_dropped,feasible\n";
}

std::string report_csv_row(const CostReport& r) {
  return r.scenario + "," + format_double(r.j_before) + "," + format_double(r.j_attack.as_double()) +
         "," + (r.j_reroute ? format_double(*r.j_reroute) : std::string()) + "," +
         std::to_string(r.n_attacked) + "," + std::to_string(r.n_sacrificed) + "," +
         std::to_string(r.n_dropped) + "," + (r.feasible ? "true" : "false") + "\n";
}

Json report_to_json(const CostReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["j_before"] = r.j_before;
  // JSON has no infinity; an unstabilized attack is reported as null.
  j["j_attack"] = r.j_attack.is_finite() ? Json(r.j_attack.value()) : Json(nullptr);
  j["j_reroute"] = r.j_reroute ? Json(*r.j_reroute) : Json(nullptr);
  j["feasible"] = r.feasible;
  j["n_attacked"] = r.n_attacked;
  j["n_sacrificed"] = r.n_sacrificed;
  j["n_dropped"] = r.n_dropped;
  j["n_rerouted"] = r.n_rerouted;
  j["algorithm"] = to_string(r.algorithm);
  return j;
}

PipelineResult run_pipeline(const Scenario& scenario) {
  const LtiPlant plant = scenario.resolve_plant();
  const BlockPartition& partition = plant.partition();

  SparsityConfig sparsity = scenario.sparsity;
  sparsity.polish = scenario.synthesis;
  if (sparsity.beta_schedule.empty()) {
    const double jc = closed_loop_cost(plant, lqr_centralized(plant)).value();
    sparsity.beta_schedule =
        default_beta_schedule(jc, scenario.beta_points, scenario.beta_lo_factor, scenario.beta_hi_factor);
  }

  SweepResult sweep = sparsity_sweep(plant, sparsity);
  PriorityTable table = rank_links(plant, sweep, scenario.synthesis);
  AttackScenario attack = scenario.attack.resolve(table.count());
  RerouteOutcome outcome = reroute(table, attack);

  // The pre-attack operating point goes through the same synthesis call as the
  // post-reroute one, so an empty attack reproduces it exactly.
  const SparsityPattern pre_pattern = table.pattern(partition);
  const StructuredResult pre =
      synthesize_structured_warm(plant, pre_pattern, scenario.synthesis, sweep.entries.front().polished);

  CostReport report;
  report.scenario = scenario.name;
  report.j_before = pre.cost;
  report.feasible = outcome.feasible;
  report.n_attacked = static_cast<int>(attack.priorities().size());
  report.n_sacrificed = static_cast<int>(outcome.sacrificed.size());
  report.n_dropped = static_cast<int>(outcome.dropped.size());
  report.n_rerouted = static_cast<int>(outcome.rerouted.size());
  report.algorithm = outcome.algorithm;

  GainMatrix attacked = pre.gain;
  for (int q : attack.priorities())
    attacked.set_block(table.at_priority(q).block,
                       Matrix::Zero(partition.row_sizes()[table.at_priority(q).block.row],
                                    partition.col_sizes()[table.at_priority(q).block.col]));
  report.j_attack = closed_loop_cost(plant, attacked);

  std::optional<StructuredResult> post;
  std::optional<SparsityPattern> post_pattern;
  if (outcome.feasible) {
    post_pattern = pattern_from(outcome, partition);
    post = synthesize_structured_warm(plant, *post_pattern, scenario.synthesis, pre.gain);
    report.j_reroute = post->cost;
  }

  PipelineResult result{report, std::move(sweep), table, attack, outcome, post, {}};
  auto& art = result.artifacts;
  const BlockGrid pre_grid = attacked_grid(table, AttackScenario(), partition);
  const BlockGrid attack_grid = attacked_grid(table, attack, partition);
  const BlockGrid post_grid = outcome_grid(outcome, partition);
  art["pre_attack.txt"] = render_text(pre_grid);
  art["pre_attack.svg"] = render_svg(pre_grid);
  art["attacked.txt"] = render_text(attack_grid);
  art["attacked.svg"] = render_svg(attack_grid);
  art["post_reroute.txt"] = render_text(post_grid);
  art["post_reroute.svg"] = render_svg(post_grid);
  art["report.csv"] = report_csv_header() + report_csv_row(report);
  art["report.json"] = report_to_json(report).dump(2) + "\n";
  art["table.json"] = table_to_json(table).dump(2) + "\n";
  art["outcome.json"] = outcome_to_json(outcome).dump(2) + "\n";
  art["sweep.csv"] = sweep_to_csv(result.sweep);
  if (post) art["post_gain.json"] = gain_to_json(*post, *post_pattern).dump(2) + "\n";
  return result;
}

void write_artifacts(const PipelineResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidInput, "cannot create " + dir + ": " + ec.message());
  for (const auto& [name, text] : result.artifacts)
    write_text_file((std::filesystem::path(dir) / name).string(), text);
}

}  // namespace linkguard
