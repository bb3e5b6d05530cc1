#include "linkguard/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linkguard/error.hpp"

namespace linkguard {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": " + e.what());
  }
}

BlockPartition partition_from_json(const Json& j) {
  return BlockPartition(j.at("rowBlockSizes").get<std::vector<int>>(),
                        j.at("colBlockSizes").get<std::vector<int>>());
}

void partition_into(Json& j, const BlockPartition& p) {
  j["rowBlockSizes"] = p.row_sizes();
  j["colBlockSizes"] = p.col_sizes();
}

}  // namespace

Json matrix_to_json(const Matrix& M) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "matrix must be a nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
    Matrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != cols)
        throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
      for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return M;
  });
}

Json plant_to_json(const LtiPlant& plant) {
  Json j;
  j["A"] = matrix_to_json(plant.A());
  j["B"] = matrix_to_json(plant.B());
  j["W"] = matrix_to_json(plant.W());
  j["Q"] = matrix_to_json(plant.Q());
  j["R"] = matrix_to_json(plant.R());
  partition_into(j, plant.partition());
  return j;
}

LtiPlant plant_from_json(const Json& j) {
  return guarded("plant", [&] {
    return LtiPlant(matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                    matrix_from_json(j.at("W")), matrix_from_json(j.at("Q")),
                    matrix_from_json(j.at("R")), partition_from_json(j));
  });
}

Json pattern_to_json(const SparsityPattern& pattern) {
  Json j;
  partition_into(j, pattern.partition());
  Json mask = Json::array();
  for (int i = 0; i < pattern.partition().block_rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < pattern.partition().block_cols(); ++c) row.push_back(pattern.is_free({i, c}) ? 1 : 0);
    mask.push_back(std::move(row));
  }
  j["mask"] = std::move(mask);
  return j;
}

SparsityPattern pattern_from_json(const Json& j) {
  return guarded("pattern", [&] {
    SparsityPattern s(partition_from_json(j));
    const Json& mask = j.at("mask");
    if (static_cast<int>(mask.size()) != s.partition().block_rows())
      throw Error(ErrorCode::InvalidInput, "mask row count");
    for (int i = 0; i < s.partition().block_rows(); ++i) {
      const Json& row = mask.at(static_cast<std::size_t>(i));
      if (static_cast<int>(row.size()) != s.partition().block_cols())
        throw Error(ErrorCode::InvalidInput, "mask column count");
      for (int c = 0; c < s.partition().block_cols(); ++c)
        s.set_free({i, c}, row.at(static_cast<std::size_t>(c)).get<int>() != 0);
    }
    return s;
  });
}

Json table_to_json(const PriorityTable& table) {
  Json rows = Json::array();
  const int width = table.width();
  for (const PriorityRow& r : table.rows()) {
    std::vector<double> values = r.values;
    values.resize(static_cast<std::size_t>(width), 0.0);
    rows.push_back({{"i", r.block.row}, {"j", r.block.col}, {"q", r.priority}, {"s", r.size}, {"values", values}});
  }
  return rows;
}

PriorityTable table_from_json(const Json& j) {
  return guarded("priority table", [&] {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "priority table must be an array");
    std::vector<PriorityRow> rows;
    for (const Json& r : j) {
      PriorityRow row{{r.at("i").get<int>(), r.at("j").get<int>()}, r.at("q").get<int>(), r.at("s").get<int>(), {}};
      auto values = r.at("values").get<std::vector<double>>();
      if (row.size < 0 || static_cast<int>(values.size()) < row.size)
        throw Error(ErrorCode::InvalidInput, "row has fewer values than its size");
      for (std::size_t k = static_cast<std::size_t>(row.size); k < values.size(); ++k)
        if (values[k] != 0.0) throw Error(ErrorCode::InvalidInput, "non-zero padding beyond row size");
      values.resize(static_cast<std::size_t>(row.size));
      row.values = std::move(values);
      rows.push_back(std::move(row));
    }
    return PriorityTable(std::move(rows));
  });
}

Json attack_to_json(const AttackScenario& attack) {
  if (attack.is_single()) return {{"attacked_block", attack.priorities().front()}};
  return {{"attacked_priorities", attack.priorities()}};
}

AttackScenario attack_from_json(const Json& j) {
  return guarded("attack", [&] {
    if (j.contains("attacked_block")) return AttackScenario::single(j.at("attacked_block").get<int>());
    if (j.contains("attacked_priorities"))
      return AttackScenario::on_priorities(j.at("attacked_priorities").get<std::vector<int>>());
    throw Error(ErrorCode::InvalidInput, "attack needs attacked_priorities or attacked_block");
  });
}

Json outcome_to_json(const RerouteOutcome& outcome) {
  Json hosts = Json::array();
  for (const auto& [attacked, used] : outcome.hosts) hosts.push_back({{"rerouted", attacked}, {"hosts", used}});
  return {{"feasible", outcome.feasible},
          {"algorithm", to_string(outcome.algorithm)},
          {"sacrificed", outcome.sacrificed},
          {"rerouted", outcome.rerouted},
          {"dropped", outcome.dropped},
          {"hosts", hosts},
          {"warnings", outcome.warnings},
          {"n_final", table_to_json(outcome.n_final)}};
}

RerouteOutcome outcome_from_json(const Json& j) {
  return guarded("outcome", [&] {
    RerouteOutcome out{table_from_json(j.at("n_final"))};
    out.feasible = j.at("feasible").get<bool>();
    out.sacrificed = j.at("sacrificed").get<std::vector<int>>();
    out.rerouted = j.at("rerouted").get<std::vector<int>>();
    out.dropped = j.at("dropped").get<std::vector<int>>();
    const std::string algorithm = j.value("algorithm", std::string("uniform"));
    if (algorithm == "uniform") out.algorithm = RerouteAlgorithm::Uniform;
    else if (algorithm == "single") out.algorithm = RerouteAlgorithm::Single;
    else if (algorithm == "multi") out.algorithm = RerouteAlgorithm::Multi;
    else throw Error(ErrorCode::InvalidInput, "unknown algorithm " + algorithm);
    if (j.contains("warnings")) out.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("hosts"))
      for (const Json& h : j.at("hosts"))
        out.hosts.emplace_back(h.at("rerouted").get<int>(), h.at("hosts").get<std::vector<int>>());
    return out;
  });
}

Json gain_to_json(const StructuredResult& result, const SparsityPattern& pattern) {
  return {{"K", matrix_to_json(result.gain.matrix())},
          {"pattern", pattern_to_json(pattern)},
          {"J", result.cost},
          {"iterations", result.iterations},
          {"converged", result.converged}};
}

Json sweep_to_json(const SweepResult& sweep) {
  Json j;
  if (!sweep.entries.empty()) partition_into(j, sweep.entries.front().gain.partition());
  Json entries = Json::array();
  for (const SweepEntry& e : sweep.entries) {
    entries.push_back({{"beta", e.beta},
                       {"K", matrix_to_json(e.gain.matrix())},
                       {"pattern", pattern_to_json(e.pattern)["mask"]},
                       {"nnz_blocks", e.nnz_blocks},
                       {"J_polished", e.j_polished},
                       {"K_polished", matrix_to_json(e.polished.matrix())}});
  }
  j["entries"] = std::move(entries);
  return j;
}

SweepResult sweep_from_json(const Json& j) {
  return guarded("sweep", [&] {
    SweepResult sweep;
    if (j.at("entries").empty()) return sweep;
    const BlockPartition p = partition_from_json(j);
    for (const Json& e : j.at("entries")) {
      Json pattern_json;
      partition_into(pattern_json, p);
      pattern_json["mask"] = e.at("pattern");
      sweep.entries.push_back(SweepEntry{e.at("beta").get<double>(), GainMatrix(matrix_from_json(e.at("K")), p),
                                         pattern_from_json(pattern_json), e.at("nnz_blocks").get<int>(),
                                         GainMatrix(matrix_from_json(e.at("K_polished")), p),
                                         e.at("J_polished").get<double>()});
    }
    return sweep;
  });
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = "beta,nnz_blocks,J_polished\n";
  for (const SweepEntry& e : sweep.entries)
    out += format_double(e.beta) + "," + std::to_string(e.nnz_blocks) + "," + format_double(e.j_polished) + "\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

}  // namespace linkguard
