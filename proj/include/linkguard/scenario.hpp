#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linkguard/lti.hpp"
#include "linkguard/prioritization.hpp"
#include "linkguard/rerouting.hpp"
#include "linkguard/serialization.hpp"
#include "linkguard/sparse_synthesis.hpp"
#include "linkguard/structured_h2.hpp"

namespace linkguard {

/// Random coupled network: N nodes of `states_per_node` states and
/// `inputs_per_node` inputs. A = M - (max Re lambda(M) + delta) I with M
/// uniform on [0, 1]; B_ii = 10 [I; 0], W = 0.5 I, Q = I, R = 10 I.
struct GeneratorSpec {
  int nodes = 10;
  int states_per_node = 2;
  int inputs_per_node = 1;
  std::uint64_t seed = 1;
  double delta = 0.1;
};

LtiPlant generate_plant(const GeneratorSpec& spec);
LtiPlant generate_plant(int nodes, std::uint64_t seed, double delta = 0.1);

/// How the attacked priorities are chosen for a pipeline run.
struct AttackSpec {
  enum class Kind { Explicit, Single, TopCount, TopFraction };
  Kind kind = Kind::TopFraction;
  std::vector<int> priorities;
  int count = 0;
  double fraction = 0.25;

  AttackScenario resolve(int r1) const;
};

struct Scenario {
  std::string name = "scenario";
  std::optional<LtiPlant> plant;
  std::optional<GeneratorSpec> generator;
  /// Empty beta_schedule means default_beta_schedule(J(K_c), beta_points, ...).
  SparsityConfig sparsity;
  int beta_points = 30;
  double beta_lo_factor = 1e-4;
  double beta_hi_factor = 1e2;
  AttackSpec attack;
  AugLagConfig synthesis;
  /// Artifacts are written here when non-empty.
  std::string output_dir;

  LtiPlant resolve_plant() const;
};

/// Reads a scenario document; relative paths resolve against `base_dir`.
Scenario scenario_from_json(const Json& j, const std::string& base_dir = ".");

struct CostReport {
  std::string scenario;
  double j_before = 0.0;
  Cost j_attack = Cost::infinite();
  std::optional<double> j_reroute;
  bool feasible = true;
  int n_attacked = 0;
  int n_sacrificed = 0;
  int n_dropped = 0;
  int n_rerouted = 0;
  RerouteAlgorithm algorithm = RerouteAlgorithm::Uniform;
};

std::string report_csv_header();
std::string report_csv_row(const CostReport& report);
Json report_to_json(const CostReport& report);

struct PipelineResult {
  CostReport report;
  SweepResult sweep;
  PriorityTable table;
  AttackScenario attack;
  RerouteOutcome outcome;
  std::optional<StructuredResult> post_attack;
  /// File name -> contents for every rendered/exported artifact.
  std::map<std::string, std::string> artifacts;
};

/// sweep -> rank -> attack -> reroute -> structured synthesis on the
/// post-attack pattern. The pre-attack operating gain is the polished gain
/// of the first sweep footprint.
PipelineResult run_pipeline(const Scenario& scenario);

/// Writes every artifact of `result` under `dir`.
void write_artifacts(const PipelineResult& result, const std::string& dir);

}  // namespace linkguard
