// Independent reference implementations the optimized code is checked
// against. These stay deliberately naive: exhaustive subset DP for path
// covers, full-scan LRU with timestamps, and geometric span counting on an
// explicitly constructed concatenation.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "stitchkit/chain_graph.hpp"
#include "stitchkit/layout.hpp"
#include "test_support.hpp"

namespace stitchkit::test {

// Maximum total arc weight over all decompositions into vertex-disjoint
// paths. Subset DP with an open path end; zero-weight "extensions" are
// allowed because splitting at them never changes the total.
inline std::uint64_t
optimal_path_cover_weight(const std::vector<std::vector<std::uint64_t>> &w) {
  const std::size_t n = w.size();
  if (n == 0)
    return 0;
  const std::size_t full = (std::size_t(1) << n) - 1;
  constexpr std::uint64_t kNone = ~std::uint64_t(0);
  std::vector<std::uint64_t> closed(full + 1, kNone);
  std::vector<std::vector<std::uint64_t>> open(
      full + 1, std::vector<std::uint64_t>(n, kNone));
  closed[0] = 0;
  for (std::size_t mask = 0; mask <= full; ++mask) {
    if (closed[mask] != kNone) {
      for (std::size_t v = 0; v < n; ++v) {
        if (mask & (std::size_t(1) << v))
          continue;
        auto &slot = open[mask | (std::size_t(1) << v)][v];
        slot = slot == kNone ? closed[mask] : std::max(slot, closed[mask]);
      }
    }
    for (std::size_t last = 0; last < n; ++last) {
      std::uint64_t cur = open[mask][last];
      if (cur == kNone)
        continue;
      closed[mask] = closed[mask] == kNone ? cur : std::max(closed[mask], cur);
      for (std::size_t v = 0; v < n; ++v) {
        if (mask & (std::size_t(1) << v))
          continue;
        std::uint64_t cand = cur + w[last][v];
        auto &slot = open[mask | (std::size_t(1) << v)][v];
        slot = slot == kNone ? cand : std::max(slot, cand);
      }
    }
  }
  return closed[full];
}

inline std::uint64_t optimal_path_cover_weight(const ChainGraph &g) {
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<std::uint64_t>> w(n,
                                            std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        w[i][j] = g.arc_weight(g.vertices[i], g.vertices[j]);
  return optimal_path_cover_weight(w);
}

// Timestamped full-scan LRU; the victim is recomputed by scanning on every
// eviction.
class NaiveLru {
public:
  NaiveLru(std::uint64_t num_sets, std::uint64_t ways)
      : ways_(ways), sets_(num_sets) {}

  bool access(std::uint64_t unit) {
    auto &set = sets_[unit % sets_.size()];
    std::uint64_t tag = unit / sets_.size();
    ++clock_;
    for (auto &entry : set)
      if (entry.tag == tag) {
        entry.last_use = clock_;
        return true;
      }
    if (set.size() < ways_) {
      set.push_back({tag, clock_});
      return false;
    }
    std::size_t victim = 0;
    for (std::size_t k = 1; k < set.size(); ++k)
      if (set[k].last_use < set[victim].last_use)
        victim = k;
    set[victim] = {tag, clock_};
    return false;
  }

private:
  struct Entry {
    std::uint64_t tag = 0;
    std::uint64_t last_use = 0;
  };
  std::uint64_t ways_;
  std::uint64_t clock_ = 0;
  std::vector<std::vector<Entry>> sets_;
};

inline std::uint64_t naive_replay_misses(const std::vector<BlockId> &trace,
                                         const Layout &layout,
                                         std::uint64_t num_sets,
                                         std::uint64_t ways,
                                         std::uint64_t unit_size) {
  NaiveLru lru(num_sets, ways);
  std::uint64_t misses = 0;
  for (const BlockId &b : trace) {
    const auto &e = layout.entry_of(b);
    std::uint64_t first = e.offset / unit_size;
    std::uint64_t last = (e.offset + e.size - 1) / unit_size;
    for (std::uint64_t unit = first; unit <= last; ++unit)
      if (!lru.access(unit))
        ++misses;
  }
  return misses;
}

// Cross-pair d-close count on the explicit concatenation S.T, evaluated
// with layout spans rather than the B/F formula.
inline std::uint64_t eq2_geometric_oracle(const Sequence &s, const Sequence &t,
                                          std::uint64_t d,
                                          const WeightedICFG &g) {
  std::map<BlockId, std::pair<std::uint64_t, std::uint64_t>> span; // start,end
  for (std::size_t k = 0; k < s.blocks.size(); ++k)
    span[s.blocks[k]] = {s.start_of(k), s.end_of(k)};
  for (std::size_t k = 0; k < t.blocks.size(); ++k)
    span[t.blocks[k]] = {s.total_size + t.start_of(k),
                         s.total_size + t.end_of(k)};
  std::set<BlockId> in_s(s.blocks.begin(), s.blocks.end());
  std::set<BlockId> in_t(t.blocks.begin(), t.blocks.end());

  std::uint64_t total = 0;
  for (const auto &[key, count] : g.edges()) {
    bool cross = (in_s.count(key.src) && in_t.count(key.dst)) ||
                 (in_t.count(key.src) && in_s.count(key.dst));
    if (!cross)
      continue;
    auto [s1, e1] = span.at(key.src);
    auto [s2, e2] = span.at(key.dst);
    std::uint64_t width = std::max(e1, e2) - std::min(s1, s2);
    if (width <= d)
      total += count;
  }
  return total;
}

// Random single-function chaining instance with weights in [1, 100].
inline ChainGraph random_chain_graph(TestRng &rng, std::size_t min_n = 2,
                                     std::size_t max_n = 8,
                                     std::uint32_t arc_pct = 40) {
  ChainGraph g;
  std::size_t n = rng.uniform(min_n, max_n);
  for (std::size_t i = 0; i < n; ++i)
    g.vertices.push_back(bid(1, std::uint16_t(i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.chance_pct(arc_pct))
        g.arcs[{g.vertices[i], g.vertices[j]}] = rng.uniform(1, 100);
  return g;
}

// Blocks for every vertex of a chain graph, so chain stats can resolve.
inline WeightedICFG graph_for_vertices(const std::vector<BlockId> &vertices) {
  WeightedICFG g;
  for (const BlockId &v : vertices) {
    BasicBlockInfo info;
    info.id = v;
    info.byte_size = 16;
    info.exec_count = 1;
    info.terminator = TerminatorKind::CondBranch;
    g.add_block(info);
  }
  return g;
}

// Random multi-function graph honoring all type invariants: intra kinds stay
// within a function, calls land on entries, stored counts are positive.
inline WeightedICFG random_icfg(TestRng &rng, std::uint32_t max_functions = 4,
                                std::uint16_t max_blocks = 6) {
  WeightedICFG g;
  std::uint32_t nf = std::uint32_t(rng.uniform(1, max_functions));
  std::vector<std::vector<BlockId>> fns(nf);
  for (std::uint32_t f = 0; f < nf; ++f) {
    std::uint16_t nb = std::uint16_t(rng.uniform(1, max_blocks));
    for (std::uint16_t b = 0; b < nb; ++b) {
      BasicBlockInfo info;
      info.id = bid(f + 1, b);
      info.byte_size = rng.uniform(4, 64);
      info.exec_count = rng.uniform(0, 50);
      bool last = b + 1 == nb;
      if (last) {
        info.terminator = TerminatorKind::Return;
      } else {
        switch (rng.uniform(0, 2)) {
        case 0: info.terminator = TerminatorKind::CondBranch; break;
        case 1: info.terminator = TerminatorKind::FallthroughOnly; break;
        default: info.terminator = TerminatorKind::UncondJump; break;
        }
      }
      g.add_block(info);
      fns[f].push_back(info.id);
    }
  }
  for (std::uint32_t f = 0; f < nf; ++f) {
    const auto &blocks = fns[f];
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const BlockId &src = blocks[b];
      TerminatorKind term = g.block(src).terminator;
      auto random_same_fn = [&] {
        return blocks[rng.uniform(0, blocks.size() - 1)];
      };
      if (term == TerminatorKind::CondBranch) {
        g.add_edge(src, random_same_fn(), EdgeKind::CondTaken,
                   rng.uniform(1, 100));
        if (b + 1 < blocks.size())
          g.add_edge(src, blocks[b + 1], EdgeKind::Fallthrough,
                     rng.uniform(1, 100));
      } else if (term == TerminatorKind::FallthroughOnly) {
        if (b + 1 < blocks.size())
          g.add_edge(src, blocks[b + 1], EdgeKind::Fallthrough,
                     rng.uniform(1, 100));
      } else if (term == TerminatorKind::UncondJump) {
        g.add_edge(src, random_same_fn(), EdgeKind::UncondJump,
                   rng.uniform(1, 100));
      }
      // occasional call into a random entry; the matching return edge lands
      // on our next block when there is one
      if (rng.chance_pct(35)) {
        std::uint32_t callee = std::uint32_t(rng.uniform(1, nf));
        g.add_edge(src, bid(callee, 0), EdgeKind::Call, rng.uniform(1, 60));
        if (b + 1 < blocks.size()) {
          const auto &callee_blocks = fns[callee - 1];
          g.add_edge(callee_blocks.back(), blocks[b + 1], EdgeKind::Return,
                     rng.uniform(1, 60));
        }
      }
    }
  }
  return g;
}

// Two disjoint random sequences over one shared graph, for pair-gain checks.
struct SequencePair {
  WeightedICFG graph;
  Sequence s, t;
};

inline SequencePair random_sequence_pair(TestRng &rng,
                                         std::size_t max_len = 20) {
  SequencePair out;
  std::size_t ns = rng.uniform(1, max_len);
  std::size_t nt = rng.uniform(1, max_len);
  std::vector<BlockId> s_blocks, t_blocks;
  for (std::size_t k = 0; k < ns + nt; ++k) {
    BasicBlockInfo info;
    info.id = bid(1, std::uint16_t(k));
    info.byte_size = rng.uniform(1, 64);
    info.exec_count = rng.uniform(0, 100);
    info.terminator = TerminatorKind::CondBranch;
    out.graph.add_block(info);
    (k < ns ? s_blocks : t_blocks).push_back(info.id);
  }
  // random shuffle via draws, then random cross edges
  for (auto *blocks : {&s_blocks, &t_blocks})
    for (std::size_t k = blocks->size(); k > 1; --k)
      std::swap((*blocks)[k - 1], (*blocks)[rng.uniform(0, k - 1)]);
  std::size_t edges = rng.uniform(1, 3 * (ns + nt));
  for (std::size_t e = 0; e < edges; ++e) {
    BlockId a = bid(1, std::uint16_t(rng.uniform(0, ns + nt - 1)));
    BlockId b = bid(1, std::uint16_t(rng.uniform(0, ns + nt - 1)));
    if (a == b)
      continue;
    out.graph.add_edge(a, b, EdgeKind::CondTaken, rng.uniform(1, 100));
  }
  out.s = make_sequence(s_blocks, out.graph);
  out.t = make_sequence(t_blocks, out.graph);
  return out;
}

} // namespace stitchkit::test
