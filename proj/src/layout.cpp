// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/layout.hpp"

#include <algorithm>
#include <set>

#include "stitchkit/error.hpp"

namespace stitchkit {

Sequence make_sequence(const std::vector<BlockId> &blocks,
                       const WeightedICFG &g) {
  Sequence seq;
  seq.blocks = blocks;
  seq.ends.reserve(blocks.size());
  for (const BlockId &b : blocks) {
    const auto &info = g.block(b);
    seq.total_size += info.byte_size;
    seq.total_exec += info.exec_count;
    seq.ends.push_back(seq.total_size);
  }
  return seq;
}

std::vector<Position> positions(const Sequence &seq) {
  std::vector<Position> out(seq.blocks.size());
  for (std::size_t k = 0; k < seq.blocks.size(); ++k) {
    out[k].forward = seq.end_of(k);
    out[k].backward = seq.total_size - seq.start_of(k);
  }
  return out;
}

std::uint64_t PartialLayout::total_size() const {
  std::uint64_t total = 0;
  for (const Sequence &s : sequences)
    total += s.total_size;
  return total;
}

PartialLayout from_cover(const PathCover &cover, const WeightedICFG &g) {
  PartialLayout layout;
  layout.sequences.reserve(cover.chains.size());
  for (std::size_t i = 0; i < cover.chains.size(); ++i) {
    Sequence seq = make_sequence(cover.chains[i].blocks, g);
    seq.chain_ids = {std::uint32_t(i)};
    layout.sequences.push_back(std::move(seq));
  }
  return layout;
}

std::uint64_t t_d(const PartialLayout &layout, const AdjacencyIndex &adj,
                  std::uint64_t d) {
  std::uint64_t total = 0;
  for (const Sequence &seq : layout.sequences) {
    std::map<BlockId, std::size_t> where;
    for (std::size_t k = 0; k < seq.blocks.size(); ++k)
      where.emplace(seq.blocks[k], k);
    for (std::size_t k = 0; k < seq.blocks.size(); ++k) {
      const BlockId &i = seq.blocks[k];
      total += adj.self_flow(i);
      for (const auto &nb : adj.out(i)) {
        if (nb.block == i)
          continue;
        auto it = where.find(nb.block);
        if (it == where.end())
          continue;
        std::size_t m = it->second;
        std::uint64_t span = std::max(seq.end_of(k), seq.end_of(m)) -
                             std::min(seq.start_of(k), seq.start_of(m));
        if (span <= d)
          total += nb.count;
      }
    }
  }
  return total;
}

std::size_t Layout::rank_of(const BlockId &b) const {
  auto it = rank_.find(b);
  if (it == rank_.end())
    throw Error(ErrorKind::UnknownBlock, format_block_id(b));
  return it->second;
}

const Layout::Entry &Layout::entry_of(const BlockId &b) const {
  return entries[rank_of(b)];
}

void Layout::push(const BlockId &id, std::uint64_t size) {
  Entry e;
  e.id = id;
  e.offset = total_size();
  e.size = size;
  rank_.emplace(id, entries.size());
  entries.push_back(e);
}

void Layout::rebuild_index() {
  rank_.clear();
  for (std::size_t i = 0; i < entries.size(); ++i)
    rank_.emplace(entries[i].id, i);
}

namespace {

// density(a) > density(b) via exact cross multiplication.
bool denser(const Sequence &a, const Sequence &b) {
  using u128 = unsigned __int128;
  u128 lhs = u128(a.total_exec) * b.total_size;
  u128 rhs = u128(b.total_exec) * a.total_size;
  if (lhs != rhs)
    return lhs > rhs;
  if (a.total_exec != b.total_exec)
    return a.total_exec > b.total_exec;
  return a.blocks.front() < b.blocks.front();
}

// Iterative Tarjan: strongly connected components of the sequence-level
// constraint graph. Constraints inside one component are unsatisfiable as a
// group; all cross-component constraints are honored.
std::vector<std::size_t>
scc_of(const std::vector<std::vector<std::size_t>> &succ) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> comp(n, n), low(n), num(n, n), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0, comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (num[root] != n)
      continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    while (!work.empty()) {
      auto &[v, edge] = work.back();
      if (edge == 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (edge < succ[v].size()) {
        std::size_t w = succ[v][edge++];
        if (num[w] == n)
          work.emplace_back(w, 0);
        else if (on_stack[w])
          low[v] = std::min(low[v], num[w]);
      } else {
        if (low[v] == num[v]) {
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = comps;
            if (w == v)
              break;
          }
          ++comps;
        }
        std::size_t v_done = v;
        work.pop_back();
        if (!work.empty())
          low[work.back().first] =
              std::min(low[work.back().first], low[v_done]);
      }
    }
  }
  return comp;
}

// Topological pass over the condensation of the chain-order constraints,
// always emitting the densest ready component; within a component, member
// sequences emit in density order.
std::vector<std::size_t>
constrained_emission(const std::vector<Sequence> &seqs,
                     const std::vector<std::size_t> &density_order,
                     const ChainOrder &order) {
  const std::size_t n = seqs.size();
  std::vector<std::size_t> seq_of_chain(order.size(), n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::uint32_t c : seqs[s].chain_ids)
      if (c < seq_of_chain.size())
        seq_of_chain[c] = s;

  std::vector<std::set<std::size_t>> succ_sets(n);
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (!order.before(a, b))
        continue;
      std::size_t sa = seq_of_chain[a], sb = seq_of_chain[b];
      if (sa < n && sb < n && sa != sb)
        succ_sets[sa].insert(sb);
    }
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t s = 0; s < n; ++s)
    succ[s].assign(succ_sets[s].begin(), succ_sets[s].end());

  std::vector<std::size_t> comp = scc_of(succ);
  std::size_t num_comps = 0;
  for (std::size_t c : comp)
    num_comps = std::max(num_comps, c + 1);

  std::vector<std::size_t> rank_in_density(n);
  for (std::size_t r = 0; r < density_order.size(); ++r)
    rank_in_density[density_order[r]] = r;

  // Component members in density order; component priority = best member.
  std::vector<std::vector<std::size_t>> members(num_comps);
  for (std::size_t r : density_order)
    members[comp[r]].push_back(r);
  std::vector<std::size_t> comp_rank(num_comps);
  for (std::size_t c = 0; c < num_comps; ++c)
    comp_rank[c] = rank_in_density[members[c].front()];

  std::vector<std::set<std::size_t>> comp_succ(num_comps);
  std::vector<std::size_t> indegree(num_comps, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t : succ[s])
      if (comp[s] != comp[t] && comp_succ[comp[s]].insert(comp[t]).second)
        ++indegree[comp[t]];

  std::set<std::pair<std::size_t, std::size_t>> ready;
  for (std::size_t c = 0; c < num_comps; ++c)
    if (indegree[c] == 0)
      ready.emplace(comp_rank[c], c);
  std::vector<std::size_t> emission;
  emission.reserve(n);
  while (!ready.empty()) {
    std::size_t c = ready.begin()->second;
    ready.erase(ready.begin());
    for (std::size_t s : members[c])
      emission.push_back(s);
    for (std::size_t t : comp_succ[c])
      if (--indegree[t] == 0)
        ready.emplace(comp_rank[t], t);
  }
  return emission;
}

} // namespace

Layout finalize(const PartialLayout &partial, const std::vector<BlockId> &cold,
                const WeightedICFG &g, const ChainOrder *order) {
  const auto &seqs = partial.sequences;
  std::vector<std::size_t> density_order(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i)
    density_order[i] = i;
  std::sort(density_order.begin(), density_order.end(),
            [&](std::size_t a, std::size_t b) { return denser(seqs[a], seqs[b]); });

  std::vector<std::size_t> emission;
  if (order == nullptr || order->empty()) {
    emission = density_order;
  } else {
    emission = constrained_emission(seqs, density_order, *order);
  }

  Layout layout;
  for (std::size_t s : emission)
    for (const BlockId &b : seqs[s].blocks)
      layout.push(b, g.block(b).byte_size);
  for (const BlockId &b : cold)
    layout.push(b, g.block(b).byte_size);
  return layout;
}

} // namespace stitchkit
