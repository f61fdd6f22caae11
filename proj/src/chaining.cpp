// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/chaining.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "stitchkit/util.hpp"

namespace stitchkit {

namespace {

struct WeightedArc {
  BlockId src, dst;
  std::uint64_t weight;
};

// Decreasing weight, ties ascending (src,dst): deterministic scan order.
std::vector<WeightedArc> sorted_arcs(const std::map<Arc, std::uint64_t> &arcs) {
  std::vector<WeightedArc> out;
  out.reserve(arcs.size());
  for (const auto &[arc, w] : arcs)
    out.push_back({arc.first, arc.second, w});
  std::sort(out.begin(), out.end(), [](const WeightedArc &a, const WeightedArc &b) {
    if (a.weight != b.weight)
      return a.weight > b.weight;
    if (!(a.src == b.src))
      return a.src < b.src;
    return a.dst < b.dst;
  });
  return out;
}

// Incremental chain construction: accepts arcs tail-to-head without closing
// a cycle. Near-constant time per probe via union by chain id.
class ChainAssembler {
public:
  explicit ChainAssembler(const std::vector<BlockId> &vertices) {
    for (const BlockId &v : vertices)
      if (!index_.count(v)) {
        index_.emplace(v, blocks_.size());
        blocks_.push_back(v);
      }
    std::size_t n = blocks_.size();
    next_.assign(n, kNone);
    prev_.assign(n, kNone);
    root_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      root_[i] = i;
  }

  void seed(const std::vector<BBChain> &chains) {
    for (const BBChain &chain : chains)
      for (std::size_t i = 0; i + 1 < chain.blocks.size(); ++i) {
        bool ok = try_link(chain.blocks[i], chain.blocks[i + 1]);
        (void)ok; // seed chains are disjoint paths by construction
      }
  }

  bool try_link(const BlockId &u, const BlockId &v) {
    auto iu = index_.find(u), iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end())
      return false;
    std::size_t a = iu->second, b = iv->second;
    if (next_[a] != kNone || prev_[b] != kNone)
      return false;
    if (find(a) == find(b))
      return false; // would close a cycle
    next_[a] = b;
    prev_[b] = a;
    root_[find(b)] = find(a);
    return true;
  }

  std::vector<BBChain> chains() const {
    std::vector<BBChain> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (prev_[i] != kNone)
        continue;
      BBChain chain;
      for (std::size_t cur = i; cur != kNone; cur = next_[cur])
        chain.blocks.push_back(blocks_[cur]);
      out.push_back(std::move(chain));
    }
    // Heads ascend in block-id order already if vertices were sorted, but the
    // insertion order is arbitrary for seeded chains; sort explicitly.
    std::sort(out.begin(), out.end(), [](const BBChain &a, const BBChain &b) {
      return a.blocks.front() < b.blocks.front();
    });
    return out;
  }

private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t find(std::size_t x) const {
    while (root_[x] != x) {
      root_[x] = root_[root_[x]];
      x = root_[x];
    }
    return x;
  }

  std::map<BlockId, std::size_t> index_;
  std::vector<BlockId> blocks_;
  std::vector<std::size_t> next_, prev_;
  mutable std::vector<std::size_t> root_;
};

PathCover finish_cover(std::vector<BBChain> chains, const ChainGraph &g) {
  PathCover cover;
  cover.chains = std::move(chains);
  cover.covered_weight = realized_weight(cover, g.arcs);
  return cover;
}

} // namespace

PathCover chain_greedy(const ChainGraph &g) {
  ChainAssembler asmblr(g.vertices);
  for (const WeightedArc &arc : sorted_arcs(g.arcs))
    asmblr.try_link(arc.src, arc.dst);
  return finish_cover(asmblr.chains(), g);
}

PathCover augment(PathCover cover, const ChainGraph &g) {
  ChainAssembler asmblr(g.vertices);
  asmblr.seed(cover.chains);
  for (const WeightedArc &arc : sorted_arcs(g.arcs))
    asmblr.try_link(arc.src, arc.dst);
  return finish_cover(asmblr.chains(), g);
}

std::vector<std::size_t>
max_weight_perfect_matching(const std::vector<std::vector<std::int64_t>> &w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> match(n);
  if (n == 0)
    return match;

  // Jonker-Volgenant style Hungarian on the cost matrix c = maxw - w,
  // O(n^3), integer arithmetic throughout.
  std::int64_t maxw = 0;
  for (const auto &row : w)
    for (std::int64_t x : row)
      maxw = std::max(maxw, x);
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      std::int64_t delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        std::int64_t cur = (maxw - w[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j)
    match[p[j] - 1] = j - 1;
  return match;
}

PathCover chain_cycle_cover(const ChainGraph &g,
                            std::size_t max_assignment_vertices) {
  const std::size_t n = g.vertices.size();
  if (n == 0)
    return PathCover{};
  if (n > max_assignment_vertices)
    return chain_greedy(g); // dense assignment too large; see module notes

  std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, 0));
  std::map<BlockId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    index.emplace(g.vertices[i], i);
  for (const auto &[arc, weight] : g.arcs) {
    auto is = index.find(arc.first), id = index.find(arc.second);
    if (is != index.end() && id != index.end())
      w[is->second][id->second] = std::int64_t(weight);
  }

  std::vector<std::size_t> succ = max_weight_perfect_matching(w);

  // The matching is a cycle cover over the zero-completed graph. Drop the
  // lightest arc of each cycle (ties: lexicographically smallest (src,dst)),
  // then split at the remaining zero-weight filler arcs, which cost nothing
  // and are not real control transfers.
  std::vector<BBChain> chains;
  std::vector<bool> visited(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start])
      continue;
    std::vector<std::size_t> cycle;
    for (std::size_t cur = start; !visited[cur]; cur = succ[cur]) {
      visited[cur] = true;
      cycle.push_back(cur);
    }
    if (cycle.size() == 1) {
      chains.push_back(BBChain{{g.vertices[cycle[0]]}, 0, 0});
      continue;
    }
    std::size_t drop = 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      std::size_t a = cycle[k], b = cycle[(k + 1) % cycle.size()];
      std::int64_t weight = w[a][b];
      if (weight < best ||
          (weight == best &&
           std::pair(g.vertices[a], g.vertices[b]) <
               std::pair(g.vertices[cycle[drop]],
                         g.vertices[succ[cycle[drop]]]))) {
        best = weight;
        drop = k;
      }
    }
    // Path in cycle order, starting right after the dropped arc.
    std::vector<std::size_t> path;
    for (std::size_t k = 1; k <= cycle.size(); ++k)
      path.push_back(cycle[(drop + k) % cycle.size()]);
    BBChain chain;
    for (std::size_t k = 0; k < path.size(); ++k) {
      chain.blocks.push_back(g.vertices[path[k]]);
      bool last = k + 1 == path.size();
      if (!last && w[path[k]][path[k + 1]] == 0) {
        chains.push_back(std::move(chain));
        chain = BBChain{};
      }
    }
    if (!chain.blocks.empty())
      chains.push_back(std::move(chain));
  }
  std::sort(chains.begin(), chains.end(), [](const BBChain &a, const BBChain &b) {
    return a.blocks.front() < b.blocks.front();
  });
  return finish_cover(std::move(chains), g);
}

PathCover chain_combined(const ChainGraphSet &set, const WeightedICFG &g,
                         std::size_t max_assignment_vertices) {
  std::vector<const ChainGraph *> graphs;
  graphs.reserve(set.per_function.size());
  for (const auto &[fn, cg] : set.per_function)
    graphs.push_back(&cg);

  std::vector<PathCover> winners(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t i) {
    const ChainGraph &cg = *graphs[i];
    PathCover a = augment(chain_greedy(cg), cg);
    PathCover b =
        augment(chain_cycle_cover(cg, max_assignment_vertices), cg);
    winners[i] = b.covered_weight >= a.covered_weight ? std::move(b)
                                                      : std::move(a);
  });

  ChainGraph merged = set.merged();
  std::vector<BBChain> all;
  for (PathCover &cover : winners)
    for (BBChain &chain : cover.chains)
      all.push_back(std::move(chain));

  ChainAssembler asmblr(merged.vertices);
  asmblr.seed(all);
  for (const WeightedArc &arc : sorted_arcs(set.tail_call_arcs))
    asmblr.try_link(arc.src, arc.dst);
  PathCover result = finish_cover(asmblr.chains(), merged);
  refresh_chain_stats(result, g);
  return result;
}

PathCover run_chaining(ChainingMode mode, const ChainGraphSet &set,
                       const WeightedICFG &g,
                       std::size_t max_assignment_vertices) {
  if (mode == ChainingMode::Combined)
    return chain_combined(set, g, max_assignment_vertices);

  ChainGraph merged = set.merged();
  if (mode == ChainingMode::Greedy) {
    PathCover cover = chain_greedy(merged);
    refresh_chain_stats(cover, g);
    return cover;
  }
  // Cycle cover per function, then tail-call stitching.
  std::vector<const ChainGraph *> graphs;
  for (const auto &[fn, cg] : set.per_function)
    graphs.push_back(&cg);
  std::vector<PathCover> covers(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t i) {
    covers[i] = augment(
        chain_cycle_cover(*graphs[i], max_assignment_vertices), *graphs[i]);
  });
  std::vector<BBChain> all;
  for (PathCover &cover : covers)
    for (BBChain &chain : cover.chains)
      all.push_back(std::move(chain));
  ChainAssembler asmblr(merged.vertices);
  asmblr.seed(all);
  for (const WeightedArc &arc : sorted_arcs(set.tail_call_arcs))
    asmblr.try_link(arc.src, arc.dst);
  PathCover result = finish_cover(asmblr.chains(), merged);
  refresh_chain_stats(result, g);
  return result;
}

} // namespace stitchkit
