// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/evaluation.hpp"

#include <algorithm>

#include "stitchkit/error.hpp"

namespace stitchkit {

std::uint64_t count_d_close(const Layout &layout, const WeightedICFG &g,
                            std::uint64_t d) {
  std::uint64_t total = 0;
  for (const auto &[key, count] : g.edges()) {
    if (key.src == key.dst) {
      total += count; // zero-span transfer
      continue;
    }
    const auto &a = layout.entry_of(key.src);
    const auto &b = layout.entry_of(key.dst);
    std::uint64_t span = std::max(a.offset + a.size, b.offset + b.size) -
                         std::min(a.offset, b.offset);
    if (span <= d)
      total += count;
  }
  return total;
}

std::uint64_t count_adjacent(const Layout &layout, const WeightedICFG &g) {
  std::uint64_t total = 0;
  for (const auto &[key, count] : g.edges()) {
    std::size_t ra = layout.rank_of(key.src);
    std::size_t rb = layout.rank_of(key.dst);
    std::size_t gap = ra > rb ? ra - rb : rb - ra;
    if (gap <= 1)
      total += count;
  }
  return total;
}

namespace {

// Set-associative LRU over abstract unit addresses (cache lines or pages).
class LruSets {
public:
  LruSets(std::uint64_t num_sets, std::uint64_t ways)
      : ways_(ways), sets_(num_sets) {}

  bool access(std::uint64_t unit) {
    auto &set = sets_[unit % sets_.size()];
    std::uint64_t tag = unit / sets_.size();
    auto it = std::find(set.begin(), set.end(), tag);
    if (it != set.end()) {
      std::rotate(set.begin(), it, it + 1); // move to MRU position
      return true;
    }
    set.insert(set.begin(), tag);
    if (set.size() > ways_)
      set.pop_back();
    return false;
  }

private:
  std::uint64_t ways_;
  std::vector<std::vector<std::uint64_t>> sets_;
};

template <typename UnitSize>
SimResult replay(const std::vector<BlockId> &trace, const Layout &layout,
                 std::uint64_t num_sets, std::uint64_t ways, UnitSize unit) {
  LruSets lru(num_sets, ways);
  SimResult r;
  for (const BlockId &b : trace) {
    const auto &e = layout.entry_of(b); // throws UnknownBlock when missing
    std::uint64_t first = e.offset / unit;
    std::uint64_t last = (e.offset + e.size - 1) / unit;
    for (std::uint64_t u = first; u <= last; ++u) {
      ++r.accesses;
      if (!lru.access(u))
        ++r.misses;
    }
    r.bytes_executed += e.size;
  }
  return r;
}

} // namespace

SimResult replay_trace(const std::vector<BlockId> &trace, const Layout &layout,
                       const CacheConfig &cache) {
  return replay(trace, layout, cache.num_sets, cache.associativity,
                cache.line_size);
}

SimResult replay_tlb(const std::vector<BlockId> &trace, const Layout &layout,
                     const TlbConfig &tlb) {
  return replay(trace, layout, tlb.num_sets(), tlb.associativity,
                tlb.page_size);
}

double mpki(const SimResult &r) {
  if (r.bytes_executed == 0)
    return 0.0;
  // instructions estimated as bytes / 4
  return double(r.misses) * 4000.0 / double(r.bytes_executed);
}

LayoutMetrics compute_metrics(const Layout &layout, const WeightedICFG &g,
                              const std::vector<std::uint64_t> &levels,
                              const std::vector<BlockId> *trace,
                              const CacheConfig &cache, const TlbConfig &tlb) {
  LayoutMetrics m;
  m.total_transfers = g.total_edge_weight();
  for (std::uint64_t d : levels)
    m.d_close_counts[d] = count_d_close(layout, g, d);
  m.adjacent_transfers = count_adjacent(layout, g);
  if (trace != nullptr && !trace->empty()) {
    m.simulated_icache_mpki = mpki(replay_trace(*trace, layout, cache));
    m.simulated_itlb_mpki = mpki(replay_tlb(*trace, layout, tlb));
  }
  return m;
}

} // namespace stitchkit
