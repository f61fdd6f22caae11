// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/chain_graph.hpp"

#include <map>
#include <set>

namespace stitchkit {

ChainGraph ChainGraphSet::merged() const {
  ChainGraph out;
  std::set<BlockId> verts;
  for (const auto &[fn, g] : per_function) {
    verts.insert(g.vertices.begin(), g.vertices.end());
    for (const auto &[arc, w] : g.arcs)
      out.arcs[arc] += w;
  }
  for (const auto &[arc, w] : tail_call_arcs) {
    out.arcs[arc] += w;
    verts.insert(arc.first);
    verts.insert(arc.second);
  }
  out.vertices.assign(verts.begin(), verts.end());
  return out;
}

ChainGraphSet build_chain_graphs(const WeightedICFG &g) {
  ChainGraphSet set;
  // Count distinct jump targets per UncondJump block; only unique-target
  // jumps can be deleted by chaining.
  std::map<BlockId, std::set<BlockId>> jump_targets;
  for (const auto &[key, count] : g.edges())
    if (key.kind == EdgeKind::UncondJump)
      jump_targets[key.src].insert(key.dst);

  for (const FunctionKey &fn : g.functions()) {
    ChainGraph &cg = set.per_function[fn];
    cg.vertices = g.function_blocks(fn);
  }

  for (const auto &[key, count] : g.edges()) {
    if (key.src == key.dst)
      continue; // self-loops never chain
    TerminatorKind term = g.block(key.src).terminator;
    bool eligible = false;
    switch (key.kind) {
    case EdgeKind::Fallthrough:
      eligible = term == TerminatorKind::CondBranch ||
                 term == TerminatorKind::FallthroughOnly;
      break;
    case EdgeKind::CondTaken:
      eligible = term == TerminatorKind::CondBranch;
      break;
    case EdgeKind::UncondJump:
      eligible = term == TerminatorKind::UncondJump &&
                 jump_targets[key.src].size() == 1;
      break;
    case EdgeKind::TailCall:
      eligible = term == TerminatorKind::TailCall;
      break;
    case EdgeKind::Call:
    case EdgeKind::Return:
      eligible = false;
      break;
    }
    if (!eligible)
      continue;
    if (key.kind == EdgeKind::TailCall)
      set.tail_call_arcs[{key.src, key.dst}] += count;
    else
      set.per_function[FunctionKey::of(key.src)].arcs[{key.src, key.dst}] +=
          count;
  }
  return set;
}

std::uint64_t realized_weight(const PathCover &cover,
                              const std::map<Arc, std::uint64_t> &arcs) {
  std::uint64_t total = 0;
  for (const BBChain &chain : cover.chains)
    for (std::size_t i = 0; i + 1 < chain.blocks.size(); ++i) {
      auto it = arcs.find({chain.blocks[i], chain.blocks[i + 1]});
      if (it != arcs.end())
        total += it->second;
    }
  return total;
}

void refresh_chain_stats(PathCover &cover, const WeightedICFG &g) {
  for (BBChain &chain : cover.chains) {
    chain.total_size = 0;
    chain.total_exec = 0;
    for (const BlockId &b : chain.blocks) {
      const auto &info = g.block(b);
      chain.total_size += info.byte_size;
      chain.total_exec += info.exec_count;
    }
  }
}

} // namespace stitchkit
