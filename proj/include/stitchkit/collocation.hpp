// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// The d-close partial layout solver. For a distance level d, repeatedly
// joins the pair of sequences whose concatenation gains the most d-close
// transfers per byte, until no join gains anything. The per-pair gain is
//
//   w(S,T) = Σ over i ∈ S, j ∈ T with B(i) + F(j) <= d of f(i,j) + f(j,i)
//
// which is exactly the number of additional d-close transfers created by
// placing T right after S.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stitchkit/layout.hpp"

namespace stitchkit {

/// Exact evaluation of the pair gain for two standalone sequences.
std::uint64_t edge_weight(const Sequence &s, const Sequence &t,
                          std::uint64_t d, const AdjacencyIndex &adj);

struct SolveStats {
  std::size_t merges = 0;
  std::size_t rejected_by_order = 0;
  std::vector<std::uint64_t> merge_gains; // per accepted merge, all > 0
};

/// One distance level. The result is a super-layout of the input; only
/// merges with positive gain are taken. A merge (S then T) is discarded if
/// the chain order constrains any chain of T before any chain of S.
PartialLayout solve_level(const PartialLayout &layout, std::uint64_t d,
                          const ChainOrder *order, const AdjacencyIndex &adj,
                          SolveStats *stats = nullptr);

/// Folds solve_level over ascending distance levels. Throws EmptyLevels when
/// the list is empty.
PartialLayout hierarchical_layout(const PathCover &cover,
                                  const std::vector<std::uint64_t> &levels,
                                  const ChainOrder *order,
                                  const WeightedICFG &g,
                                  std::vector<SolveStats> *stats = nullptr);

/// 4 KB page, then the cache/TLB set-conflict guarantees for 2 MB pages and
/// the two TLB levels: {4K, 32K, 128K, 256K, 512K, 2M}.
const std::vector<std::uint64_t> &default_distance_levels();

} // namespace stitchkit
