// linkguard: command-line front end for the synthesis, ranking and rerouting
// pipeline. Exit codes: 0 ok, 2 infeasible countermeasure, 3 pattern not
// stabilizable, 4 input error.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "linkguard/error.hpp"
#include "linkguard/h2.hpp"
#include "linkguard/render.hpp"
#include "linkguard/scenario.hpp"
#include "linkguard/serialization.hpp"

using namespace linkguard;

namespace {

constexpr int kExitInfeasible = 2;
constexpr int kExitNotStabilizable = 3;
constexpr int kExitInput = 4;

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string plant;
  std::string sweep;
  std::string table;
  std::string attack;
  std::string pattern;
  std::string outcome;
  int nodes = 10;
  double delta = 0.1;
};

std::string parent_dir(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

Scenario load_scenario(const Options& o) {
  Scenario s;
  if (!o.scenario.empty()) {
    s = scenario_from_json(read_json_file(o.scenario), parent_dir(o.scenario));
  } else if (!o.plant.empty()) {
    s.plant = plant_from_json(read_json_file(o.plant));
  } else {
    s.generator = GeneratorSpec{};
    s.generator->nodes = o.nodes;
    s.generator->delta = o.delta;
    if (!o.seed) throw Error(ErrorCode::InvalidInput, "need --scenario, --plant or --seed");
  }
  if (o.seed) {
    if (!s.generator) throw Error(ErrorCode::InvalidInput, "--seed only applies to generated plants");
    s.generator->seed = *o.seed;
  }
  return s;
}

SparsityConfig sweep_config(const Scenario& s, const LtiPlant& plant) {
  SparsityConfig c = s.sparsity;
  c.polish = s.synthesis;
  if (c.beta_schedule.empty()) {
    const double jc = closed_loop_cost(plant, lqr_centralized(plant)).value();
    c.beta_schedule = default_beta_schedule(jc, s.beta_points, s.beta_lo_factor, s.beta_hi_factor);
  }
  return c;
}

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::InvalidInput, std::string("missing ") + flag);
}

// Rejects an unsupported --format before any work is done.
void check_format(const std::string& format, const char* message) {
  if (!format.empty() && format != "csv" && format != "json") throw Error(ErrorCode::UnknownFormat, message);
}

int cmd_gen(const Options& o) {
  emit(o, dump(plant_to_json(load_scenario(o).resolve_plant())));
  return 0;
}

int cmd_sweep(const Options& o) {
  check_format(o.format, "sweep writes csv or json");
  const Scenario s = load_scenario(o);
  const LtiPlant plant = s.resolve_plant();
  const SweepResult sweep = sparsity_sweep(plant, sweep_config(s, plant));
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format == "csv") emit(o, sweep_to_csv(sweep));
  else emit(o, dump(sweep_to_json(sweep)));
  return 0;
}

int cmd_rank(const Options& o) {
  require(o.sweep, "--sweep");
  const Scenario s = load_scenario(o);
  const PriorityTable table = rank_links(s.resolve_plant(), sweep_from_json(read_json_file(o.sweep)), s.synthesis);
  emit(o, dump(table_to_json(table)));
  return 0;
}

int cmd_reroute(const Options& o) {
  require(o.table, "--table");
  require(o.attack, "--attack");
  const PriorityTable table = table_from_json(read_json_file(o.table));
  const RerouteOutcome outcome = reroute(table, attack_from_json(read_json_file(o.attack)));
  emit(o, dump(outcome_to_json(outcome)));
  return outcome.feasible ? 0 : kExitInfeasible;
}

int cmd_synth(const Options& o) {
  require(o.pattern, "--pattern");
  const Scenario s = load_scenario(o);
  const LtiPlant plant = s.resolve_plant();
  const SparsityPattern pattern = pattern_from_json(read_json_file(o.pattern));
  emit(o, dump(gain_to_json(synthesize_structured(plant, pattern, s.synthesis), pattern)));
  return 0;
}

int cmd_run(const Options& o) {
  check_format(o.format, "run reports csv or json");
  const Scenario s = load_scenario(o);
  const PipelineResult result = run_pipeline(s);
  const std::string dir = o.out.empty() ? s.output_dir : o.out;
  if (!dir.empty()) write_artifacts(result, dir);
  if (o.format == "json") std::cout << dump(report_to_json(result.report));
  else std::cout << report_csv_header() << report_csv_row(result.report);
  return result.report.feasible ? 0 : kExitInfeasible;
}

int cmd_render(const Options& o) {
  const RenderFormat format = parse_render_format(o.format.empty() ? "text" : o.format);
  std::optional<BlockGrid> grid;
  if (!o.outcome.empty()) {
    const RerouteOutcome outcome = outcome_from_json(read_json_file(o.outcome));
    require(o.pattern, "--pattern (for the block partition)");
    grid = outcome_grid(outcome, pattern_from_json(read_json_file(o.pattern)).partition());
  } else if (!o.table.empty()) {
    require(o.pattern, "--pattern (for the block partition)");
    const PriorityTable table = table_from_json(read_json_file(o.table));
    const AttackScenario attack = o.attack.empty() ? AttackScenario() : attack_from_json(read_json_file(o.attack));
    grid = attacked_grid(table, attack, pattern_from_json(read_json_file(o.pattern)).partition());
  } else {
    require(o.pattern, "--pattern");
    grid = grid_from(pattern_from_json(read_json_file(o.pattern)));
  }
  emit(o, render(*grid, format));
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InfeasibleOutcome:
      return kExitInfeasible;
    case ErrorCode::PatternNotStabilizable:
      return kExitNotStabilizable;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidInput:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::UnknownFormat:
    case ErrorCode::InvalidAssumption:
    case ErrorCode::EmptySweep:
      return kExitInput;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse H2 feedback synthesis, link ranking and DoS rerouting"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file");
    sub->add_option("--seed", o.seed, "Generator seed (overrides the scenario's)");
    sub->add_option("--plant", o.plant, "Plant JSON file");
    sub->add_option("--nodes", o.nodes, "Generated plant: number of subsystems");
    sub->add_option("--delta", o.delta, "Generated plant: stability margin");
    sub->add_option("--out", o.out, "Output file (directory for run)");
    sub->add_option("--format", o.format, "text|svg|csv|json");
  };

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, int (*fn)(const Options&)) {
    common(sub);
    sub->callback([&, fn] { action = [&, fn] { return fn(o); }; });
  };

  bind(app.add_subcommand("gen", "Emit a generated plant as JSON"), cmd_gen);
  auto* sweep = app.add_subcommand("sweep", "Run the sparsity-promoting beta sweep");
  bind(sweep, cmd_sweep);
  auto* rank = app.add_subcommand("rank", "Build the priority table from a sweep");
  rank->add_option("--sweep", o.sweep, "Sweep JSON file");
  bind(rank, cmd_rank);
  auto* rr = app.add_subcommand("reroute", "Apply the rerouting countermeasure to an attack");
  rr->add_option("--table", o.table, "Priority table JSON file");
  rr->add_option("--attack", o.attack, "Attack JSON file");
  bind(rr, cmd_reroute);
  auto* synth = app.add_subcommand("synth", "Structured H2 synthesis on a pattern");
  synth->add_option("--pattern", o.pattern, "Pattern JSON file");
  bind(synth, cmd_synth);
  bind(app.add_subcommand("run", "Full pipeline with cost report"), cmd_run);
  auto* render_cmd = app.add_subcommand("render", "Render a pattern, table or outcome");
  render_cmd->add_option("--pattern", o.pattern, "Pattern JSON file (also supplies the partition)");
  render_cmd->add_option("--table", o.table, "Priority table JSON file");
  render_cmd->add_option("--attack", o.attack, "Attack JSON file");
  render_cmd->add_option("--outcome", o.outcome, "Reroute outcome JSON file");
  bind(render_cmd, cmd_render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "linkguard: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "linkguard: " << e.what() << "\n";
    return 1;
  }
}
