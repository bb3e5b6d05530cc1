#pragma once

#include <string>

#include "json.hpp"
#include "linkguard/lti.hpp"
#include "linkguard/prioritization.hpp"
#include "linkguard/rerouting.hpp"
#include "linkguard/sparse_synthesis.hpp"
#include "linkguard/structured_h2.hpp"

namespace linkguard {

using Json = nlohmann::json;

// Matrices are row-major nested arrays. Doubles are written with the
// shortest representation that parses back to the same value, so
// write(read(text)) reproduces the text and read(write(x)) reproduces x.

Json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const Json& j);

/// {A, B, W, Q, R, rowBlockSizes, colBlockSizes}
Json plant_to_json(const LtiPlant& plant);
LtiPlant plant_from_json(const Json& j);

/// {rowBlockSizes, colBlockSizes, mask: [[0|1]]}
Json pattern_to_json(const SparsityPattern& pattern);
SparsityPattern pattern_from_json(const Json& j);

/// [{i, j, q, s, values[]}] with 0-based block indices and values padded
/// to the table width.
Json table_to_json(const PriorityTable& table);
PriorityTable table_from_json(const Json& j);

/// {attacked_priorities: [int]} or {attacked_block: int}
Json attack_to_json(const AttackScenario& attack);
AttackScenario attack_from_json(const Json& j);

/// {feasible, sacrificed[], rerouted[], dropped[], n_final, algorithm, warnings[]}
Json outcome_to_json(const RerouteOutcome& outcome);
RerouteOutcome outcome_from_json(const Json& j);

/// {K, pattern, J, iterations, converged}
Json gain_to_json(const StructuredResult& result, const SparsityPattern& pattern);

/// {rowBlockSizes, colBlockSizes, entries: [{beta, K, pattern, nnz_blocks, J_polished, K_polished}]}
Json sweep_to_json(const SweepResult& sweep);
SweepResult sweep_from_json(const Json& j);
/// beta,nnz_blocks,J_polished
std::string sweep_to_csv(const SweepResult& sweep);

/// 17 significant digits; "inf" for the infinite sentinel.
std::string format_double(double v);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace linkguard
