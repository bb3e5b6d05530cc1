#include "linkguard/render.hpp"

#include <algorithm>
#include <sstream>

#include "linkguard/error.hpp"

namespace linkguard {

namespace {

constexpr const char* kFreeGlyph = "■";
constexpr const char* kZeroGlyph = "·";

std::size_t flat(const BlockPartition& p, BlockIndex b) {
  if (!p.contains(b)) throw Error(ErrorCode::IndexOutOfRange, "block index");
  return static_cast<std::size_t>(b.row * p.block_cols() + b.col);
}

const char* glyph(BlockState s) {
  switch (s) {
    case BlockState::Zero: return kZeroGlyph;
    case BlockState::Free: return kFreeGlyph;
    case BlockState::Attacked: return "A";
    case BlockState::Sacrificed: return "S";
    case BlockState::Rerouted: return "R";
  }
  return "?";
}

const char* fill(BlockState s) {
  switch (s) {
    case BlockState::Zero: return "#f2f2f2";
    case BlockState::Free: return "#3b7dd8";
    case BlockState::Attacked: return "#d64541";
    case BlockState::Sacrificed: return "#f0a030";
    case BlockState::Rerouted: return "#3fa34d";
  }
  return "#000000";
}

void annotate(BlockGrid& grid, const PriorityTable& table) {
  for (const PriorityRow& row : table.rows()) {
    const std::size_t k = flat(grid.partition, row.block);
    grid.priorities[k] = row.priority;
    grid.sizes[k] = row.size;
  }
}

}  // namespace

BlockGrid::BlockGrid(BlockPartition p) : partition(std::move(p)) {
  const auto n = static_cast<std::size_t>(partition.block_rows() * partition.block_cols());
  states.assign(n, BlockState::Zero);
  priorities.assign(n, 0);
  sizes.assign(n, 0);
}

BlockState& BlockGrid::at(BlockIndex b) { return states[flat(partition, b)]; }
BlockState BlockGrid::at(BlockIndex b) const { return states[flat(partition, b)]; }

int BlockGrid::count(BlockState s) const {
  return static_cast<int>(std::count(states.begin(), states.end(), s));
}

BlockGrid grid_from(const SparsityPattern& pattern) {
  BlockGrid g(pattern.partition());
  for (const BlockIndex& b : pattern.free_blocks()) g.at(b) = BlockState::Free;
  return g;
}

BlockGrid attacked_grid(const PriorityTable& table, const AttackScenario& attack,
                        const BlockPartition& partition) {
  BlockGrid g(partition);
  annotate(g, table);
  const std::vector<bool> mask = attack.mask(table.count());
  for (const PriorityRow& row : table.rows())
    g.at(row.block) = mask[static_cast<std::size_t>(row.priority - 1)] ? BlockState::Attacked
                                                                      : BlockState::Free;
  return g;
}

BlockGrid outcome_grid(const RerouteOutcome& outcome, const BlockPartition& partition) {
  BlockGrid g(partition);
  annotate(g, outcome.n_final);
  auto has = [](const std::vector<int>& v, int q) { return std::find(v.begin(), v.end(), q) != v.end(); };
  for (const PriorityRow& row : outcome.n_final.rows()) {
    BlockState s = BlockState::Free;
    if (has(outcome.sacrificed, row.priority)) s = BlockState::Sacrificed;
    else if (has(outcome.rerouted, row.priority)) s = BlockState::Rerouted;
    else if (has(outcome.dropped, row.priority)) s = BlockState::Attacked;
    g.at(row.block) = s;
  }
  return g;
}

RenderFormat parse_render_format(const std::string& name) {
  if (name == "text") return RenderFormat::Text;
  if (name == "svg") return RenderFormat::Svg;
  throw Error(ErrorCode::UnknownFormat, "render format '" + name + "'");
}

std::string render_text(const BlockGrid& grid) {
  std::string out;
  for (int i = 0; i < grid.partition.block_rows(); ++i) {
    for (int j = 0; j < grid.partition.block_cols(); ++j) out += glyph(grid.at({i, j}));
    out += '\n';
  }
  return out;
}

std::string render_svg(const BlockGrid& grid) {
  constexpr int cell = 44;
  constexpr int margin = 4;
  const int rows = grid.partition.block_rows();
  const int cols = grid.partition.block_cols();
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell + 2 * margin
      << "\" height=\"" << rows * cell + 2 * margin << "\" font-family=\"monospace\" font-size=\"9\">\n";
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const std::size_t k = flat(grid.partition, {i, j});
      const int x = margin + j * cell;
      const int y = margin + i * cell;
      const BlockState s = grid.states[k];
      svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell - 2 << "\" height=\""
          << cell - 2 << "\" fill=\"" << fill(s) << "\" stroke=\"#555555\"";
      if (s == BlockState::Sacrificed) svg << " stroke-dasharray=\"4,2\"";
      svg << "/>\n";
      if (grid.priorities[k] > 0) {
        svg << "  <text x=\"" << x + 3 << "\" y=\"" << y + 14 << "\">q=" << grid.priorities[k]
            << "</text>\n";
        svg << "  <text x=\"" << x + 3 << "\" y=\"" << y + 30 << "\">s=" << grid.sizes[k]
            << "</text>\n";
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render(const BlockGrid& grid, RenderFormat format) {
  return format == RenderFormat::Svg ? render_svg(grid) : render_text(grid);
}

SparsityPattern parse_text_grid(const std::string& text, const BlockPartition& partition) {
  SparsityPattern s = SparsityPattern::empty(partition);
  std::istringstream in(text);
  std::string line;
  int i = 0;
  const std::string free_glyph = kFreeGlyph;
  const std::string zero_glyph = kZeroGlyph;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= partition.block_rows()) throw Error(ErrorCode::DimensionMismatch, "too many grid rows");
    int j = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
      if (j >= partition.block_cols()) throw Error(ErrorCode::DimensionMismatch, "too many grid columns");
      bool free = false;
      if (line.compare(pos, free_glyph.size(), free_glyph) == 0) {
        free = true;
        pos += free_glyph.size();
      } else if (line.compare(pos, zero_glyph.size(), zero_glyph) == 0) {
        pos += zero_glyph.size();
      } else if (line[pos] == 'R') {
        free = true;
        ++pos;
      } else if (line[pos] == 'A' || line[pos] == 'S') {
        ++pos;
      } else {
        throw Error(ErrorCode::UnknownFormat, "unexpected glyph in grid");
      }
      s.set_free({i, j++}, free);
    }
    if (j != partition.block_cols()) throw Error(ErrorCode::DimensionMismatch, "short grid row");
    ++i;
  }
  if (i != partition.block_rows()) throw Error(ErrorCode::DimensionMismatch, "missing grid rows");
  return s;
}

}  // namespace linkguard
