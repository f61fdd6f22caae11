// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Basic block chaining: maximum weighted path cover heuristics. The greedy
// scan is the classic O(m lg n) approach; the cycle-cover route solves an
// exact assignment problem and drops the lightest arc of each cycle, which
// keeps at least half the optimal path cover weight. The combined selector
// takes the better of the two per function and stitches tail calls last.

#pragma once

#include <cstdint>
#include <vector>

#include "stitchkit/chain_graph.hpp"

namespace stitchkit {

enum class ChainingMode { Greedy, CycleCover, Combined };

/// Scans arcs in strictly decreasing weight order (ties: ascending (src,dst))
/// and accepts an arc iff its source is a chain tail and its destination a
/// head of a different chain.
PathCover chain_greedy(const ChainGraph &g);

/// Assignment-based 1/2-approximation. Functions with more than
/// `max_assignment_vertices` vertices fall back to the greedy scan (the dense
/// Hungarian instance grows quadratically).
PathCover chain_cycle_cover(const ChainGraph &g,
                            std::size_t max_assignment_vertices = 2000);

/// Adds remaining arcs tail-to-head in decreasing weight order. Monotone in
/// covered weight and idempotent.
PathCover augment(PathCover cover, const ChainGraph &g);

/// Per function keeps the heavier of augment(greedy) and augment(cycle cover)
/// (ties favor the cycle-cover result), then stitches chains across functions
/// along tail-call arcs. Honors the STITCHKIT_THREADS cap for the per-function
/// phase.
PathCover chain_combined(const ChainGraphSet &set, const WeightedICFG &g,
                         std::size_t max_assignment_vertices = 2000);

/// Runs the configured mode over the whole graph set.
PathCover run_chaining(ChainingMode mode, const ChainGraphSet &set,
                       const WeightedICFG &g,
                       std::size_t max_assignment_vertices = 2000);

/// Maximum-weight perfect matching on a dense square matrix (weights >= 0).
/// Returns the matched column for each row. Deterministic.
std::vector<std::size_t>
max_weight_perfect_matching(const std::vector<std::vector<std::int64_t>> &w);

} // namespace stitchkit
