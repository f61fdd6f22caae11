// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Partial layouts (disjoint BB sequences with in-sequence byte offsets;
// distance across sequences is infinite) and the final total layout.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "stitchkit/chain_graph.hpp"
#include "stitchkit/partial_order.hpp"

namespace stitchkit {

/// One BB sequence of a partial layout. Offsets are consecutive byte spans;
/// block k occupies [end(k) - size(k), end(k)).
struct Sequence {
  std::vector<BlockId> blocks;
  std::vector<std::uint64_t> ends; // cumulative end offsets, same length
  std::uint64_t total_size = 0;
  std::uint64_t total_exec = 0;            // Σ f(i), for density sorting
  std::vector<std::uint32_t> chain_ids;    // constituent chains, in layout order

  std::uint64_t start_of(std::size_t k) const {
    return k == 0 ? 0 : ends[k - 1];
  }
  std::uint64_t end_of(std::size_t k) const { return ends[k]; }
  std::uint64_t size_of(std::size_t k) const { return ends[k] - start_of(k); }
};

Sequence make_sequence(const std::vector<BlockId> &blocks,
                       const WeightedICFG &g);

/// Forward and backward positions of a block within its sequence, both
/// inclusive of the block itself: F = bytes from sequence start through the
/// block, B = bytes from the block through the sequence end.
struct Position {
  std::uint64_t forward = 0;  // F(i) = end(i)
  std::uint64_t backward = 0; // B(i) = size(seq) - start(i)
};

std::vector<Position> positions(const Sequence &seq);

struct PartialLayout {
  std::vector<Sequence> sequences;

  std::uint64_t total_size() const;
};

/// One sequence per chain, in chain order.
PartialLayout from_cover(const PathCover &cover, const WeightedICFG &g);

/// t_d(L): total d-close transfers realized inside the sequences, evaluated
/// over aggregated flows. Self-transfers always count.
std::uint64_t t_d(const PartialLayout &layout, const AdjacencyIndex &adj,
                  std::uint64_t d);

/// The final total order with byte offsets.
struct Layout {
  struct Entry {
    BlockId id;
    std::uint64_t offset = 0;
    std::uint64_t size = 0;
  };
  std::vector<Entry> entries; // rank order, offsets gap-free from 0

  bool contains(const BlockId &b) const { return rank_.count(b) != 0; }
  std::size_t rank_of(const BlockId &b) const;
  const Entry &entry_of(const BlockId &b) const;
  std::uint64_t total_size() const {
    return entries.empty() ? 0 : entries.back().offset + entries.back().size;
  }

  void push(const BlockId &id, std::uint64_t size);
  void rebuild_index();

private:
  std::map<BlockId, std::size_t> rank_;
};

/// Emits hot sequences in decreasing execution density (density ties: larger
/// total exec first, then smaller first-block id), then cold blocks in their
/// original per-function order. When an order is supplied, sequence emission
/// additionally respects surviving chain-order constraints via a stable
/// topological pass over the density order.
Layout finalize(const PartialLayout &partial,
                const std::vector<BlockId> &cold, const WeightedICFG &g,
                const ChainOrder *order = nullptr);

} // namespace stitchkit
