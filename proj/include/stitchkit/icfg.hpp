// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// The weighted inter-procedural control flow graph: every downstream stage
// (chaining, collocation, evaluation) consumes this structure read-only.

#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "stitchkit/block_id.hpp"

namespace stitchkit {

struct EdgeKey {
  BlockId src;
  BlockId dst;
  EdgeKind kind = EdgeKind::Fallthrough;

  friend auto operator<=>(const EdgeKey &a, const EdgeKey &b) {
    return std::tuple(a.src, a.dst, a.kind) <=> std::tuple(b.src, b.dst, b.kind);
  }
  friend bool operator==(const EdgeKey &a, const EdgeKey &b) = default;
};

class WeightedICFG {
public:
  /// Registers a block. Returns false if a block with the same id already
  /// exists (the existing record is kept).
  bool add_block(const BasicBlockInfo &info);

  /// Accumulates `count` onto the (src,dst,kind) edge. Duplicate records sum.
  /// Throws DanglingEdge for unknown endpoints and InvariantViolation when
  /// the edge breaks a type invariant (call to non-entry, intra-procedural
  /// kind across functions, zero count).
  void add_edge(const BlockId &src, const BlockId &dst, EdgeKind kind,
                std::uint64_t count);

  /// Merges every block and edge of `other` into this graph, summing counts
  /// of coinciding edges and exec counts of coinciding blocks.
  void merge(const WeightedICFG &other);

  bool has_block(const BlockId &id) const { return blocks_.count(id) != 0; }
  const BasicBlockInfo &block(const BlockId &id) const;
  BasicBlockInfo &block_mut(const BlockId &id);

  const std::map<BlockId, BasicBlockInfo> &blocks() const { return blocks_; }
  const std::map<EdgeKey, std::uint64_t> &edges() const { return edges_; }

  /// Blocks of one function, ascending block_index (the original order).
  std::vector<BlockId> function_blocks(const FunctionKey &f) const;
  /// All functions present, ascending key.
  std::vector<FunctionKey> functions() const;

  std::uint64_t total_edge_weight() const;
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

private:
  std::map<BlockId, BasicBlockInfo> blocks_;
  std::map<EdgeKey, std::uint64_t> edges_;
};

/// Subgraph induced by blocks with exec_count >= threshold. Edges keep only
/// those with both endpoints hot.
WeightedICFG hot_subgraph(const WeightedICFG &g, std::uint64_t threshold);

/// Blocks below the threshold, in original per-function order (functions
/// ascending, block_index ascending). These trail the hot code in the final
/// layout.
std::vector<BlockId> cold_blocks(const WeightedICFG &g, std::uint64_t threshold);

/// Kind-agnostic adjacency over aggregated counts: f(i,j) summed over all
/// edge kinds. Built once per graph, then shared read-only.
class AdjacencyIndex {
public:
  explicit AdjacencyIndex(const WeightedICFG &g);

  struct Neighbor {
    BlockId block;
    std::uint64_t count;
  };

  const std::vector<Neighbor> &out(const BlockId &b) const;
  const std::vector<Neighbor> &in(const BlockId &b) const;

  /// f(i,j) aggregated over kinds; 0 when no edge is stored.
  std::uint64_t flow(const BlockId &i, const BlockId &j) const;

  /// Self-transfer weight f(i,i); always d-close by definition.
  std::uint64_t self_flow(const BlockId &b) const;

private:
  std::map<BlockId, std::vector<Neighbor>> out_;
  std::map<BlockId, std::vector<Neighbor>> in_;
  std::map<std::pair<BlockId, BlockId>, std::uint64_t> flow_;
  std::vector<Neighbor> empty_;
};

} // namespace stitchkit
