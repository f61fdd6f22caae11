// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// The fall-through maximization instance: a weighted digraph whose arcs are
// exactly the control transfers that chaining may turn into fall-throughs.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "stitchkit/icfg.hpp"

namespace stitchkit {

using Arc = std::pair<BlockId, BlockId>;

/// Chaining-eligible arcs only: intra-procedural fall-through / taken-branch /
/// unconditional-jump transfers plus tail calls into function entries. Never
/// regular calls or returns, never self-loops.
struct ChainGraph {
  std::vector<BlockId> vertices;        // ascending
  std::map<Arc, std::uint64_t> arcs;

  std::uint64_t arc_weight(const BlockId &u, const BlockId &v) const {
    auto it = arcs.find({u, v});
    return it == arcs.end() ? 0 : it->second;
  }
};

/// Eligible arcs split the way the combined selector consumes them: one
/// intra-procedural instance per function, plus the tail-call arcs used to
/// stitch chains across functions afterwards.
struct ChainGraphSet {
  std::map<FunctionKey, ChainGraph> per_function;
  std::map<Arc, std::uint64_t> tail_call_arcs;

  /// Union of all per-function arcs and tail-call arcs, over all vertices.
  ChainGraph merged() const;
};

/// Extracts eligibility from a (hot) graph. Arc rules:
///  - Fallthrough from CondBranch/FallthroughOnly blocks
///  - CondTaken from CondBranch blocks
///  - UncondJump only when the source's jump target is unique (the jump can
///    then be deleted); IndirectJump sources never chain
///  - TailCall into entries (recursive ones included)
/// Self-loops are removed; their weight is still always d-close for the
/// evaluator.
ChainGraphSet build_chain_graphs(const WeightedICFG &g);

/// An ordered run of blocks that can be laid out with no interior taken
/// jumps. Interior blocks never end with a return; an interior unconditional
/// jump is only allowed when its target is the next block in the chain.
struct BBChain {
  std::vector<BlockId> blocks;
  std::uint64_t total_size = 0;
  std::uint64_t total_exec = 0;
};

/// A decomposition of the hot blocks into disjoint chains. covered_weight is
/// the arc weight realized as consecutive pairs.
struct PathCover {
  std::vector<BBChain> chains;
  std::uint64_t covered_weight = 0;
};

/// Recomputes the realized weight of a cover against an arc set.
std::uint64_t realized_weight(const PathCover &cover,
                              const std::map<Arc, std::uint64_t> &arcs);

/// Rebuilds chain size/exec caches from the graph's block table.
void refresh_chain_stats(PathCover &cover, const WeightedICFG &g);

} // namespace stitchkit
