#pragma once

#include <string>
#include <vector>

#include "linkguard/lti.hpp"
#include "linkguard/rerouting.hpp"

namespace linkguard {

enum class BlockState { Zero, Free, Attacked, Sacrificed, Rerouted };

/// Per-block display state with optional priority/size annotations
/// (priority 0 = not in a table).
struct BlockGrid {
  BlockPartition partition;
  std::vector<BlockState> states;  // row-major over blocks
  std::vector<int> priorities;
  std::vector<int> sizes;

  explicit BlockGrid(BlockPartition p);
  BlockState& at(BlockIndex b);
  BlockState at(BlockIndex b) const;
  int count(BlockState s) const;
};

BlockGrid grid_from(const SparsityPattern& pattern);
/// Table blocks as free, with the attacked ones marked.
BlockGrid attacked_grid(const PriorityTable& table, const AttackScenario& attack,
                        const BlockPartition& partition);
/// Post-reroute view: rerouted, sacrificed, and dropped (shown as attacked).
BlockGrid outcome_grid(const RerouteOutcome& outcome, const BlockPartition& partition);

enum class RenderFormat { Text, Svg };

/// "text" or "svg"; anything else throws UnknownFormat.
RenderFormat parse_render_format(const std::string& name);

/// One line per block row, one glyph per block:
/// U+25A0 free, U+00B7 zero, A attacked, S sacrificed, R rerouted.
std::string render_text(const BlockGrid& grid);
std::string render_svg(const BlockGrid& grid);
std::string render(const BlockGrid& grid, RenderFormat format);

/// Inverse of render_text: free and rerouted glyphs are free blocks,
/// everything else is zero.
SparsityPattern parse_text_grid(const std::string& text, const BlockPartition& partition);

}  // namespace linkguard
