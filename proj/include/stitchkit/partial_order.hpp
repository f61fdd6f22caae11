// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Branch-prediction partial ordering of BB chains. BD(b) measures how
// lopsided a conditional branch is; BPP(S,T) accumulates the prediction
// profit of emitting S before T. The order is a strict partial order kept
// transitively closed while profitable pairs are accepted greedily.

#pragma once

#include <cstdint>
#include <vector>

#include "stitchkit/chain_graph.hpp"

namespace stitchkit {

/// Strict partial order over chain indices, kept transitively closed.
class ChainOrder {
public:
  ChainOrder() = default;
  explicit ChainOrder(std::size_t n);

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  /// True iff the closure contains (a before b).
  bool before(std::size_t a, std::size_t b) const;

  /// Accepts (a before b) unless it contradicts the closure; returns whether
  /// it was accepted. Acceptance re-closes transitively.
  bool try_add(std::size_t a, std::size_t b);

  /// Irreflexive + antisymmetric + transitive audit, for tests.
  bool is_strict_partial_order() const;

  std::size_t relation_count() const;

private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> succ_; // row-major bitset, succ_[a] ∋ b

  bool bit(std::size_t a, std::size_t b) const {
    return (succ_[a * words_ + b / 64] >> (b % 64)) & 1;
  }
  void set_bit(std::size_t a, std::size_t b) {
    succ_[a * words_ + b / 64] |= std::uint64_t(1) << (b % 64);
  }
};

/// A conditional branch block and its two targets. t_b is the more likely
/// target (ties resolve to the fall-through successor). A side whose count
/// is zero has no stored edge; its target location is then unknown and it
/// cannot contribute to cross-sequence profit terms.
struct BranchInfo {
  BlockId block;
  BlockId likely;                  // t_b
  std::optional<BlockId> unlikely; // f_b, when its edge was recorded
  std::int64_t divergence = 0;     // BD(b) = f(b,t_b) - f(b,f_b), >= 0
};

/// BD(b) for a conditional branch block: the count difference of its taken
/// and fall-through edges (an absent side counts zero). Throws NotABranch
/// for blocks that are not two-way conditional branches.
std::int64_t compute_bd(const WeightedICFG &g, const BlockId &b);

/// All qualifying branch blocks of the graph, ascending by block id.
std::vector<BranchInfo> collect_branches(const WeightedICFG &g);

/// BPP(S,T) evaluated over two block sequences. Antisymmetric by
/// construction: compute_bpp(S,T) == -compute_bpp(T,S).
std::int64_t compute_bpp(const std::vector<BlockId> &s,
                         const std::vector<BlockId> &t, const WeightedICFG &g);

/// Greedy acceptance of positive-profit pairs in decreasing profit order
/// (ties: ascending chain index pair). Pairs with profit <= min_bpp are
/// ignored.
ChainOrder partial_order(const PathCover &cover, const WeightedICFG &g,
                         std::int64_t min_bpp = 0);

} // namespace stitchkit
