// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/icfg.hpp"

#include <algorithm>

#include "stitchkit/error.hpp"

namespace stitchkit {

bool WeightedICFG::add_block(const BasicBlockInfo &info) {
  if (info.byte_size == 0)
    throw Error(ErrorKind::InvariantViolation,
                "block " + format_block_id(info.id) + " has byte_size 0");
  return blocks_.emplace(info.id, info).second;
}

void WeightedICFG::add_edge(const BlockId &src, const BlockId &dst,
                            EdgeKind kind, std::uint64_t count) {
  if (count == 0)
    throw Error(ErrorKind::InvariantViolation,
                "stored edges require count > 0 (" + format_block_id(src) +
                    " -> " + format_block_id(dst) + ")");
  if (!has_block(src) || !has_block(dst))
    throw Error(ErrorKind::DanglingEdge,
                "edge references unknown block (" + format_block_id(src) +
                    " -> " + format_block_id(dst) + ")");
  if ((kind == EdgeKind::Call || kind == EdgeKind::TailCall) &&
      !dst.is_function_entry())
    throw Error(ErrorKind::InvariantViolation,
                std::string(to_string(kind)) + " edge to non-entry block " +
                    format_block_id(dst));
  if (is_intra_kind(kind) && !same_function(src, dst))
    throw Error(ErrorKind::InvariantViolation,
                std::string(to_string(kind)) + " edge crosses functions (" +
                    format_block_id(src) + " -> " + format_block_id(dst) + ")");
  edges_[EdgeKey{src, dst, kind}] += count;
}

void WeightedICFG::merge(const WeightedICFG &other) {
  for (const auto &[id, info] : other.blocks_) {
    auto [it, inserted] = blocks_.emplace(id, info);
    if (!inserted)
      it->second.exec_count += info.exec_count;
  }
  for (const auto &[key, count] : other.edges_)
    edges_[key] += count;
}

const BasicBlockInfo &WeightedICFG::block(const BlockId &id) const {
  auto it = blocks_.find(id);
  if (it == blocks_.end())
    throw Error(ErrorKind::UnknownBlock, format_block_id(id));
  return it->second;
}

BasicBlockInfo &WeightedICFG::block_mut(const BlockId &id) {
  auto it = blocks_.find(id);
  if (it == blocks_.end())
    throw Error(ErrorKind::UnknownBlock, format_block_id(id));
  return it->second;
}

std::vector<BlockId> WeightedICFG::function_blocks(const FunctionKey &f) const {
  std::vector<BlockId> out;
  BlockId lo{f.module_tag, f.function_id, 0};
  for (auto it = blocks_.lower_bound(lo);
       it != blocks_.end() && FunctionKey::of(it->first) == f; ++it)
    out.push_back(it->first);
  return out;
}

std::vector<FunctionKey> WeightedICFG::functions() const {
  std::vector<FunctionKey> out;
  for (const auto &[id, info] : blocks_) {
    FunctionKey f = FunctionKey::of(id);
    if (out.empty() || !(out.back() == f))
      out.push_back(f);
  }
  return out;
}

std::uint64_t WeightedICFG::total_edge_weight() const {
  std::uint64_t total = 0;
  for (const auto &[key, count] : edges_)
    total += count;
  return total;
}

WeightedICFG hot_subgraph(const WeightedICFG &g, std::uint64_t threshold) {
  WeightedICFG hot;
  for (const auto &[id, info] : g.blocks())
    if (info.exec_count >= threshold)
      hot.add_block(info);
  for (const auto &[key, count] : g.edges())
    if (hot.has_block(key.src) && hot.has_block(key.dst))
      hot.add_edge(key.src, key.dst, key.kind, count);
  return hot;
}

std::vector<BlockId> cold_blocks(const WeightedICFG &g,
                                 std::uint64_t threshold) {
  std::vector<BlockId> out;
  for (const auto &[id, info] : g.blocks())
    if (info.exec_count < threshold)
      out.push_back(id);
  return out; // map order == original per-function order
}

AdjacencyIndex::AdjacencyIndex(const WeightedICFG &g) {
  for (const auto &[key, count] : g.edges())
    flow_[{key.src, key.dst}] += count;
  for (const auto &[pair, count] : flow_) {
    out_[pair.first].push_back({pair.second, count});
    in_[pair.second].push_back({pair.first, count});
  }
}

const std::vector<AdjacencyIndex::Neighbor> &
AdjacencyIndex::out(const BlockId &b) const {
  auto it = out_.find(b);
  return it == out_.end() ? empty_ : it->second;
}

const std::vector<AdjacencyIndex::Neighbor> &
AdjacencyIndex::in(const BlockId &b) const {
  auto it = in_.find(b);
  return it == in_.end() ? empty_ : it->second;
}

std::uint64_t AdjacencyIndex::flow(const BlockId &i, const BlockId &j) const {
  auto it = flow_.find({i, j});
  return it == flow_.end() ? 0 : it->second;
}

std::uint64_t AdjacencyIndex::self_flow(const BlockId &b) const {
  return flow(b, b);
}

} // namespace stitchkit
