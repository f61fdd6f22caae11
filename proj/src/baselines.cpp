// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/baselines.hpp"

#include <algorithm>
#include <map>

#include "stitchkit/chaining.hpp"

namespace stitchkit {

namespace {

using u128 = unsigned __int128;

// Intra-function greedy chaining; chains emitted by ascending original
// position of their earliest block, so the entry block group leads.
std::map<FunctionKey, std::vector<BlockId>>
chained_function_blocks(const WeightedICFG &g) {
  ChainGraphSet set = build_chain_graphs(g);
  std::map<FunctionKey, std::vector<BlockId>> out;
  for (const auto &[fn, cg] : set.per_function) {
    PathCover cover = chain_greedy(cg);
    std::vector<const BBChain *> chains;
    for (const BBChain &c : cover.chains)
      chains.push_back(&c);
    auto min_index = [](const BBChain &c) {
      std::uint16_t lo = c.blocks.front().block_index;
      for (const BlockId &b : c.blocks)
        lo = std::min(lo, b.block_index);
      return lo;
    };
    std::sort(chains.begin(), chains.end(),
              [&](const BBChain *a, const BBChain *b) {
                auto ia = min_index(*a), ib = min_index(*b);
                if (ia != ib)
                  return ia < ib;
                return a->blocks.front() < b->blocks.front();
              });
    std::vector<BlockId> &blocks = out[fn];
    for (const BBChain *c : chains)
      blocks.insert(blocks.end(), c->blocks.begin(), c->blocks.end());
  }
  return out;
}

// Undirected call weights between distinct functions.
std::map<std::pair<FunctionKey, FunctionKey>, std::uint64_t>
function_call_weights(const WeightedICFG &g) {
  std::map<std::pair<FunctionKey, FunctionKey>, std::uint64_t> w;
  for (const auto &[key, count] : g.edges()) {
    if (key.kind != EdgeKind::Call && key.kind != EdgeKind::TailCall)
      continue;
    FunctionKey a = FunctionKey::of(key.src);
    FunctionKey b = FunctionKey::of(key.dst);
    if (a == b)
      continue;
    if (b < a)
      std::swap(a, b);
    w[{a, b}] += count;
  }
  return w;
}

// Pettis-Hansen greedy coarsening over function-granularity units. Units map
// to block runs; the merge orientation maximizes the call weight between the
// two units meeting at the seam.
struct PhUnits {
  std::vector<FunctionKey> keys;                     // ascending
  std::map<FunctionKey, std::vector<BlockId>> blocks;
  std::map<FunctionKey, std::uint64_t> exec;
};

std::vector<FunctionKey> ph_order(const PhUnits &units,
                                  const WeightedICFG &g) {
  auto pair_weights = function_call_weights(g);
  auto seam = [&](const FunctionKey &a, const FunctionKey &b) {
    auto key = a < b ? std::pair(a, b) : std::pair(b, a);
    auto it = pair_weights.find(key);
    return it == pair_weights.end() ? std::uint64_t(0) : it->second;
  };

  std::map<FunctionKey, std::size_t> cluster_of;
  std::vector<std::vector<FunctionKey>> clusters;
  for (const FunctionKey &fn : units.keys) {
    cluster_of[fn] = clusters.size();
    clusters.push_back({fn});
  }

  // Directed caller->callee edges; when all merge orientations tie, the
  // caller's cluster leads.
  std::map<std::pair<FunctionKey, FunctionKey>, std::uint64_t> directed;
  for (const auto &[key, count] : g.edges()) {
    if (key.kind != EdgeKind::Call && key.kind != EdgeKind::TailCall)
      continue;
    FunctionKey caller = FunctionKey::of(key.src);
    FunctionKey callee = FunctionKey::of(key.dst);
    if (caller == callee || !cluster_of.count(caller) ||
        !cluster_of.count(callee))
      continue;
    directed[{caller, callee}] += count;
  }
  struct PairEdge {
    std::uint64_t weight;
    FunctionKey a, b; // caller, callee
  };
  std::vector<PairEdge> edges;
  for (const auto &[key, weight] : directed)
    edges.push_back({weight, key.first, key.second});
  std::sort(edges.begin(), edges.end(), [](const PairEdge &x, const PairEdge &y) {
    if (x.weight != y.weight)
      return x.weight > y.weight;
    return std::tuple(x.a, x.b) < std::tuple(y.a, y.b);
  });

  for (const PairEdge &e : edges) {
    std::size_t ca = cluster_of[e.a], cb = cluster_of[e.b];
    if (ca == cb)
      continue;
    std::vector<FunctionKey> &x = clusters[ca];
    std::vector<FunctionKey> &y = clusters[cb];
    // Candidate orientations, first maximal one wins: X.Y, X.rev(Y),
    // rev(X).Y, rev(X).rev(Y).
    std::uint64_t best = 0;
    int pick = 0;
    const std::uint64_t seams[4] = {
        seam(x.back(), y.front()), seam(x.back(), y.back()),
        seam(x.front(), y.front()), seam(x.front(), y.back())};
    for (int k = 0; k < 4; ++k)
      if (seams[k] > best) {
        best = seams[k];
        pick = k;
      }
    if (pick == 1 || pick == 3)
      std::reverse(y.begin(), y.end());
    if (pick == 2 || pick == 3)
      std::reverse(x.begin(), x.end());
    for (const FunctionKey &fn : y) {
      cluster_of[fn] = ca;
      x.push_back(fn);
    }
    y.clear();
  }

  // Surviving clusters emit hottest first.
  struct Final {
    std::uint64_t exec = 0;
    std::vector<FunctionKey> fns;
  };
  std::vector<Final> finals;
  for (auto &cluster : clusters) {
    if (cluster.empty())
      continue;
    Final f;
    f.fns = std::move(cluster);
    for (const FunctionKey &fn : f.fns)
      f.exec += units.exec.count(fn) ? units.exec.at(fn) : 0;
    finals.push_back(std::move(f));
  }
  std::sort(finals.begin(), finals.end(), [](const Final &a, const Final &b) {
    if (a.exec != b.exec)
      return a.exec > b.exec;
    return a.fns.front() < b.fns.front();
  });

  std::vector<FunctionKey> order;
  for (const Final &f : finals)
    order.insert(order.end(), f.fns.begin(), f.fns.end());
  return order;
}

PhUnits make_units(const WeightedICFG &g,
                   std::map<FunctionKey, std::vector<BlockId>> blocks) {
  PhUnits units;
  for (auto &[fn, blks] : blocks) {
    units.keys.push_back(fn);
    std::uint64_t exec = 0;
    for (const BlockId &b : blks)
      exec += g.block(b).exec_count;
    units.exec[fn] = exec;
  }
  units.blocks = std::move(blocks);
  return units;
}

} // namespace

Layout original_layout(const WeightedICFG &g) {
  Layout layout;
  for (const auto &[id, info] : g.blocks())
    layout.push(id, info.byte_size);
  return layout;
}

Layout baseline_ph_functions(const WeightedICFG &g) {
  PhUnits units = make_units(g, chained_function_blocks(g));
  Layout layout;
  for (const FunctionKey &fn : ph_order(units, g))
    for (const BlockId &b : units.blocks.at(fn))
      layout.push(b, g.block(b).byte_size);
  return layout;
}

Layout baseline_ph_bb(const WeightedICFG &g, std::uint64_t hot_threshold) {
  WeightedICFG hot = hot_subgraph(g, hot_threshold);
  std::vector<BlockId> cold = cold_blocks(g, hot_threshold);

  PhUnits units = make_units(hot, chained_function_blocks(hot));
  Layout layout;
  for (const FunctionKey &fn : ph_order(units, hot))
    for (const BlockId &b : units.blocks.at(fn))
      layout.push(b, g.block(b).byte_size);
  for (const BlockId &b : cold)
    layout.push(b, g.block(b).byte_size);
  return layout;
}

Layout baseline_c3(const WeightedICFG &g, std::uint64_t size_cap) {
  struct Fn {
    FunctionKey key;
    std::vector<BlockId> blocks;
    std::uint64_t size = 0;
    std::uint64_t exec = 0;
    std::uint64_t incoming_calls = 0;
  };
  std::map<FunctionKey, Fn> fns;
  for (const FunctionKey &key : g.functions()) {
    Fn fn;
    fn.key = key;
    fn.blocks = g.function_blocks(key);
    for (const BlockId &b : fn.blocks) {
      fn.size += g.block(b).byte_size;
      fn.exec += g.block(b).exec_count;
    }
    fns.emplace(key, std::move(fn));
  }

  std::map<std::pair<FunctionKey, FunctionKey>, std::uint64_t> call_w;
  for (const auto &[key, count] : g.edges()) {
    if (key.kind != EdgeKind::Call && key.kind != EdgeKind::TailCall)
      continue;
    FunctionKey caller = FunctionKey::of(key.src);
    FunctionKey callee = FunctionKey::of(key.dst);
    if (caller == callee)
      continue;
    call_w[{caller, callee}] += count;
    fns.at(callee).incoming_calls += count;
  }

  // Hottest callee first; each one chases its most frequent caller.
  std::vector<const Fn *> by_hotness;
  for (const auto &[key, fn] : fns)
    by_hotness.push_back(&fn);
  std::sort(by_hotness.begin(), by_hotness.end(), [](const Fn *a, const Fn *b) {
    if (a->incoming_calls != b->incoming_calls)
      return a->incoming_calls > b->incoming_calls;
    return a->key < b->key;
  });

  std::map<FunctionKey, std::size_t> cluster_of;
  struct Cluster {
    std::vector<FunctionKey> fns;
    std::uint64_t size = 0;
    std::uint64_t exec = 0;
  };
  std::vector<Cluster> clusters;
  for (const auto &[key, fn] : fns) {
    cluster_of[key] = clusters.size();
    clusters.push_back({{key}, fn.size, fn.exec});
  }

  for (const Fn *fn : by_hotness) {
    if (fn->incoming_calls == 0)
      continue;
    FunctionKey best_caller{};
    std::uint64_t best_weight = 0;
    bool found = false;
    for (const auto &[pair, weight] : call_w) {
      if (!(pair.second == fn->key))
        continue;
      if (!found || weight > best_weight ||
          (weight == best_weight && pair.first < best_caller)) {
        best_caller = pair.first;
        best_weight = weight;
        found = true;
      }
    }
    if (!found)
      continue;
    std::size_t cc = cluster_of[best_caller];
    std::size_t cf = cluster_of[fn->key];
    if (cc == cf)
      continue;
    if (clusters[cc].size + clusters[cf].size > size_cap)
      continue; // callee keeps its own cluster
    for (const FunctionKey &moved : clusters[cf].fns)
      cluster_of[moved] = cc;
    Cluster &dst = clusters[cc];
    Cluster &src = clusters[cf];
    dst.fns.insert(dst.fns.end(), src.fns.begin(), src.fns.end());
    dst.size += src.size;
    dst.exec += src.exec;
    src.fns.clear();
    src.size = src.exec = 0;
  }

  std::vector<const Cluster *> finals;
  for (const Cluster &c : clusters)
    if (!c.fns.empty())
      finals.push_back(&c);
  std::sort(finals.begin(), finals.end(), [](const Cluster *a, const Cluster *b) {
    u128 lhs = u128(a->exec) * (b->size ? b->size : 1);
    u128 rhs = u128(b->exec) * (a->size ? a->size : 1);
    if (lhs != rhs)
      return lhs > rhs;
    if (a->exec != b->exec)
      return a->exec > b->exec;
    return a->fns.front() < b->fns.front();
  });

  Layout layout;
  for (const Cluster *c : finals)
    for (const FunctionKey &fn : c->fns)
      for (const BlockId &b : fns.at(fn).blocks)
        layout.push(b, g.block(b).byte_size);
  return layout;
}

} // namespace stitchkit
