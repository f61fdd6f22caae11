// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Layout scoring: d-close transfer counts over the final layout, and
// trace-driven set-associative LRU simulation of the instruction cache and
// TLB. Simulators index by layout (virtual) address and are deterministic.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "stitchkit/layout.hpp"

namespace stitchkit {

struct CacheConfig {
  std::uint64_t line_size = 64; // bytes, power of two
  std::uint64_t num_sets = 64;
  std::uint64_t associativity = 8;

  std::uint64_t capacity() const { return line_size * num_sets * associativity; }
};

struct TlbConfig {
  std::uint64_t page_size = 4096;
  std::uint64_t entries = 128;
  std::uint64_t associativity = 4; // sets = entries / associativity

  std::uint64_t num_sets() const { return entries / associativity; }
};

struct LayoutMetrics {
  std::uint64_t total_transfers = 0;
  std::map<std::uint64_t, std::uint64_t> d_close_counts;
  std::uint64_t adjacent_transfers = 0;
  std::optional<double> simulated_icache_mpki;
  std::optional<double> simulated_itlb_mpki;
};

/// Σ f(i,j) over block pairs whose symmetric layout span
/// max(end_i, end_j) - min(start_i, start_j) is <= d. Self-transfers always
/// count. Every edge endpoint must be present in the layout.
std::uint64_t count_d_close(const Layout &layout, const WeightedICFG &g,
                            std::uint64_t d);

/// Transfers between blocks at adjacent ranks (plus self-transfers).
std::uint64_t count_adjacent(const Layout &layout, const WeightedICFG &g);

struct SimResult {
  std::uint64_t misses = 0;
  std::uint64_t accesses = 0;       // line or page touches
  std::uint64_t bytes_executed = 0; // for the MPKI denominator
};

/// Replays a block execution trace: each block expands to its touched cache
/// lines, driven through a set-associative LRU cache. Throws UnknownBlock
/// for trace blocks missing from the layout.
SimResult replay_trace(const std::vector<BlockId> &trace, const Layout &layout,
                       const CacheConfig &cache);

/// Same at page granularity.
SimResult replay_tlb(const std::vector<BlockId> &trace, const Layout &layout,
                     const TlbConfig &tlb);

/// Misses per thousand instructions, with instructions estimated as
/// bytes_executed / 4.
double mpki(const SimResult &r);

LayoutMetrics compute_metrics(const Layout &layout, const WeightedICFG &g,
                              const std::vector<std::uint64_t> &levels,
                              const std::vector<BlockId> *trace = nullptr,
                              const CacheConfig &cache = {},
                              const TlbConfig &tlb = {});

} // namespace stitchkit
