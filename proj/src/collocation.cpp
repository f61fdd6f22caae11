// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/collocation.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "stitchkit/error.hpp"

namespace stitchkit {

std::uint64_t edge_weight(const Sequence &s, const Sequence &t,
                          std::uint64_t d, const AdjacencyIndex &adj) {
  std::map<BlockId, std::size_t> t_index;
  for (std::size_t m = 0; m < t.blocks.size(); ++m)
    t_index.emplace(t.blocks[m], m);

  std::uint64_t w = 0;
  for (std::size_t k = 0; k < s.blocks.size(); ++k) {
    const BlockId &i = s.blocks[k];
    std::uint64_t backward = s.total_size - s.start_of(k); // B(i)
    for (const auto &nb : adj.out(i)) {
      auto it = t_index.find(nb.block);
      if (it != t_index.end() && backward + t.end_of(it->second) <= d)
        w += nb.count; // f(i,j)
    }
    for (const auto &nb : adj.in(i)) {
      auto it = t_index.find(nb.block);
      if (it != t_index.end() && backward + t.end_of(it->second) <= d)
        w += nb.count; // f(j,i)
    }
  }
  return w;
}

const std::vector<std::uint64_t> &default_distance_levels() {
  static const std::vector<std::uint64_t> levels = {
      4096, 32768, 131072, 262144, 524288, 2097152};
  return levels;
}

namespace {

using u128 = unsigned __int128;

struct HeapEntry {
  std::uint64_t w = 0;        // gain of placing dst right after src
  std::uint64_t size_sum = 0; // size(src) + size(dst)
  std::uint32_t src = 0, dst = 0;
  std::uint32_t src_version = 0, dst_version = 0;
  std::uint64_t src_anchor = 0, dst_anchor = 0; // first-block ids, tie-break
};

// Max-heap priority: density w/size_sum, then absolute gain, then the
// lexicographically smallest anchor pair.
struct HeapLess {
  bool operator()(const HeapEntry &a, const HeapEntry &b) const {
    u128 lhs = u128(a.w) * b.size_sum;
    u128 rhs = u128(b.w) * a.size_sum;
    if (lhs != rhs)
      return lhs < rhs;
    if (a.w != b.w)
      return a.w < b.w;
    return std::pair(a.src_anchor, a.dst_anchor) >
           std::pair(b.src_anchor, b.dst_anchor);
  }
};

struct Node {
  std::vector<std::uint32_t> blocks;
  std::uint64_t size = 0;
  std::uint64_t exec = 0;
  std::vector<std::uint32_t> chain_ids;
  std::set<std::uint32_t> neighbors; // nodes sharing at least one transfer
  std::uint32_t version = 0;
  bool alive = true;
};

class LevelSolver {
public:
  LevelSolver(const PartialLayout &input, std::uint64_t d,
              const ChainOrder *order, const AdjacencyIndex &adj)
      : d_(d), order_(order) {
    for (const Sequence &seq : input.sequences)
      for (const BlockId &b : seq.blocks) {
        block_index_.emplace(b, std::uint32_t(ids_.size()));
        ids_.push_back(b);
      }
    const std::size_t nb = ids_.size();
    node_of_.resize(nb);
    start_.resize(nb);
    end_.resize(nb);
    out_.resize(nb);
    in_.resize(nb);

    nodes_.reserve(input.sequences.size());
    for (const Sequence &seq : input.sequences) {
      Node node;
      node.size = seq.total_size;
      node.exec = seq.total_exec;
      node.chain_ids = seq.chain_ids;
      for (std::size_t k = 0; k < seq.blocks.size(); ++k) {
        std::uint32_t bi = block_index_.at(seq.blocks[k]);
        node.blocks.push_back(bi);
        node_of_[bi] = std::uint32_t(nodes_.size());
        start_[bi] = seq.start_of(k);
        end_[bi] = seq.end_of(k);
      }
      nodes_.push_back(std::move(node));
    }

    for (std::uint32_t bi = 0; bi < nb; ++bi) {
      for (const auto &nb_out : adj.out(ids_[bi])) {
        auto it = block_index_.find(nb_out.block);
        if (it == block_index_.end())
          continue; // transfer into a block outside this layout (cold)
        out_[bi].push_back({it->second, nb_out.count});
        in_[it->second].push_back({bi, nb_out.count});
        if (node_of_[bi] != node_of_[it->second]) {
          nodes_[node_of_[bi]].neighbors.insert(node_of_[it->second]);
          nodes_[node_of_[it->second]].neighbors.insert(node_of_[bi]);
        }
      }
    }
  }

  PartialLayout run(SolveStats *stats) {
    for (std::uint32_t s = 0; s < nodes_.size(); ++s)
      for (std::uint32_t t : nodes_[s].neighbors)
        if (t > s) {
          push_pair(s, t);
          push_pair(t, s);
        }

    while (!heap_.empty()) {
      HeapEntry top = heap_.top();
      heap_.pop();
      Node &src = nodes_[top.src];
      Node &dst = nodes_[top.dst];
      if (!src.alive || !dst.alive || src.version != top.src_version ||
          dst.version != top.dst_version)
        continue; // stale entry
      if (violates_order(src, dst)) {
        if (stats)
          ++stats->rejected_by_order;
        continue;
      }
      merge(top.src, top.dst);
      if (stats) {
        ++stats->merges;
        stats->merge_gains.push_back(top.w);
      }
    }

    PartialLayout result;
    std::vector<std::uint32_t> alive;
    for (std::uint32_t s = 0; s < nodes_.size(); ++s)
      if (nodes_[s].alive)
        alive.push_back(s);
    std::sort(alive.begin(), alive.end(), [&](std::uint32_t a, std::uint32_t b) {
      return ids_[nodes_[a].blocks.front()] < ids_[nodes_[b].blocks.front()];
    });
    for (std::uint32_t s : alive) {
      const Node &node = nodes_[s];
      Sequence seq;
      seq.total_size = node.size;
      seq.total_exec = node.exec;
      seq.chain_ids = node.chain_ids;
      seq.blocks.reserve(node.blocks.size());
      seq.ends.reserve(node.blocks.size());
      for (std::uint32_t bi : node.blocks) {
        seq.blocks.push_back(ids_[bi]);
        seq.ends.push_back(end_[bi]);
      }
      result.sequences.push_back(std::move(seq));
    }
    return result;
  }

private:
  struct Flow {
    std::uint32_t block;
    std::uint64_t count;
  };

  // Pair gain over current positions: transfers that become d-close when
  // node t lands right after node s. Evaluated from the smaller side.
  std::uint64_t weight_between(std::uint32_t s, std::uint32_t t) const {
    const Node &sn = nodes_[s];
    const Node &tn = nodes_[t];
    std::uint64_t w = 0;
    if (sn.blocks.size() <= tn.blocks.size()) {
      for (std::uint32_t bi : sn.blocks) {
        std::uint64_t backward = sn.size - start_[bi];
        for (const Flow &f : out_[bi])
          if (node_of_[f.block] == t && backward + end_[f.block] <= d_)
            w += f.count;
        for (const Flow &f : in_[bi])
          if (node_of_[f.block] == t && backward + end_[f.block] <= d_)
            w += f.count;
      }
    } else {
      for (std::uint32_t bj : tn.blocks) {
        std::uint64_t forward = end_[bj];
        for (const Flow &f : in_[bj])
          if (node_of_[f.block] == s &&
              sn.size - start_[f.block] + forward <= d_)
            w += f.count;
        for (const Flow &f : out_[bj])
          if (node_of_[f.block] == s &&
              sn.size - start_[f.block] + forward <= d_)
            w += f.count;
      }
    }
    return w;
  }

  void push_pair(std::uint32_t s, std::uint32_t t) {
    std::uint64_t w = weight_between(s, t);
    if (w == 0)
      return; // zero-gain merges are never taken (finest grain)
    HeapEntry e;
    e.w = w;
    e.size_sum = nodes_[s].size + nodes_[t].size;
    e.src = s;
    e.dst = t;
    e.src_version = nodes_[s].version;
    e.dst_version = nodes_[t].version;
    e.src_anchor = ids_[nodes_[s].blocks.front()].pack();
    e.dst_anchor = ids_[nodes_[t].blocks.front()].pack();
    heap_.push(e);
  }

  bool violates_order(const Node &src, const Node &dst) const {
    if (order_ == nullptr || order_->empty())
      return false;
    for (std::uint32_t ct : dst.chain_ids)
      for (std::uint32_t cs : src.chain_ids)
        if (order_->before(ct, cs))
          return true;
    return false;
  }

  void merge(std::uint32_t s, std::uint32_t t) {
    Node &sn = nodes_[s];
    Node &tn = nodes_[t];
    for (std::uint32_t bi : tn.blocks) {
      node_of_[bi] = s;
      start_[bi] += sn.size;
      end_[bi] += sn.size;
      sn.blocks.push_back(bi);
    }
    sn.size += tn.size;
    sn.exec += tn.exec;
    sn.chain_ids.insert(sn.chain_ids.end(), tn.chain_ids.begin(),
                        tn.chain_ids.end());
    sn.version += 1;
    tn.alive = false;

    std::set<std::uint32_t> merged_adj;
    for (std::uint32_t u : sn.neighbors)
      if (u != t && nodes_[u].alive)
        merged_adj.insert(u);
    for (std::uint32_t u : tn.neighbors)
      if (u != s && nodes_[u].alive)
        merged_adj.insert(u);
    sn.neighbors = merged_adj;
    tn.neighbors.clear();

    for (std::uint32_t u : merged_adj) {
      nodes_[u].neighbors.erase(t);
      nodes_[u].neighbors.insert(s);
      push_pair(s, u);
      push_pair(u, s);
    }
  }

  std::uint64_t d_;
  const ChainOrder *order_;
  std::vector<BlockId> ids_;
  std::map<BlockId, std::uint32_t> block_index_;
  std::vector<std::uint32_t> node_of_;
  std::vector<std::uint64_t> start_, end_;
  std::vector<std::vector<Flow>> out_, in_;
  std::vector<Node> nodes_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap_;
};

} // namespace

PartialLayout solve_level(const PartialLayout &layout, std::uint64_t d,
                          const ChainOrder *order, const AdjacencyIndex &adj,
                          SolveStats *stats) {
  LevelSolver solver(layout, d, order, adj);
  return solver.run(stats);
}

PartialLayout hierarchical_layout(const PathCover &cover,
                                  const std::vector<std::uint64_t> &levels,
                                  const ChainOrder *order,
                                  const WeightedICFG &g,
                                  std::vector<SolveStats> *stats) {
  if (levels.empty())
    throw Error(ErrorKind::EmptyLevels, "no distance levels given");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == 0 || (i > 0 && levels[i] <= levels[i - 1]))
      throw Error(ErrorKind::ConfigError,
                  "distance levels must be positive and strictly increasing");

  AdjacencyIndex adj(g);
  PartialLayout layout = from_cover(cover, g);
  for (std::uint64_t d : levels) {
    SolveStats level_stats;
    layout = solve_level(layout, d, order, adj, &level_stats);
    if (stats)
      stats->push_back(std::move(level_stats));
  }
  return layout;
}

} // namespace stitchkit
