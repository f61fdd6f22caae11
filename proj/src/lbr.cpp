// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/lbr.hpp"

#include <set>

#include "stitchkit/error.hpp"

namespace stitchkit {

void BlockMap::add(std::uint64_t start, std::uint64_t size, const BlockId &id) {
  if (size == 0)
    throw Error(ErrorKind::InvariantViolation,
                "block map range with zero size");
  // The neighbor on each side must not intersect [start, start+size).
  auto next = ranges_.lower_bound(start);
  if (next != ranges_.end() && next->first < start + size)
    throw Error(ErrorKind::InvariantViolation, "overlapping block map ranges");
  if (next != ranges_.begin()) {
    auto prev = std::prev(next);
    if (prev->second.start + prev->second.size > start)
      throw Error(ErrorKind::InvariantViolation,
                  "overlapping block map ranges");
  }
  ranges_.emplace(start, Range{start, size, id});
}

std::optional<BlockMap::Range> BlockMap::range_of(std::uint64_t addr) const {
  auto it = ranges_.upper_bound(addr);
  if (it == ranges_.begin())
    return std::nullopt;
  --it;
  const Range &r = it->second;
  if (addr >= r.start && addr < r.start + r.size)
    return r;
  return std::nullopt;
}

std::optional<BlockMap::Range> BlockMap::range_at(std::uint64_t addr) const {
  auto it = ranges_.find(addr);
  if (it == ranges_.end())
    return std::nullopt;
  return it->second;
}

std::optional<BlockId> BlockMap::resolve(std::uint64_t addr) const {
  auto r = range_of(addr);
  if (!r)
    return std::nullopt;
  return r->id;
}

namespace {

// Raw record classes, before terminators are known.
enum class RecordClass { IntraTaken, CallLike, ReturnLike };

struct RawCounts {
  std::map<std::pair<BlockId, BlockId>, std::uint64_t> intra_taken;
  std::map<std::pair<BlockId, BlockId>, std::uint64_t> call_like;
  std::map<std::pair<BlockId, BlockId>, std::uint64_t> return_like;
  std::map<std::pair<BlockId, BlockId>, std::uint64_t> fallthrough;
  std::map<BlockId, std::uint64_t> exec;
  std::set<BlockId> fell_through; // blocks observed falling into their successor
};

RecordClass classify(const BlockMap::Range &src_range,
                     const BlockMap::Range &dst_range,
                     std::uint64_t dst_addr) {
  const BlockId &u = src_range.id;
  const BlockId &v = dst_range.id;
  if (!same_function(u, v)) {
    if (dst_addr == dst_range.start && v.is_function_entry())
      return RecordClass::CallLike;
    return RecordClass::ReturnLike; // lands mid-function: a return continuation
  }
  if (dst_addr == dst_range.start)
    return RecordClass::IntraTaken;
  return RecordClass::ReturnLike; // recursive return into the caller block
}

} // namespace

WeightedICFG ingest_lbr(const std::vector<LbrSample> &samples,
                        const BlockMap &map, LbrStats *stats_out) {
  LbrStats stats;
  RawCounts raw;

  for (const LbrSample &sample : samples) {
    ++stats.samples;
    for (std::size_t i = 0; i < sample.records.size(); ++i) {
      const auto &rec = sample.records[i];
      ++stats.records;
      auto src_range = map.range_of(rec.src);
      auto dst_range = map.range_of(rec.dst);
      if (!src_range || !dst_range) {
        ++stats.unmapped_records;
        continue;
      }
      auto key = std::make_pair(src_range->id, dst_range->id);
      switch (classify(*src_range, *dst_range, rec.dst)) {
      case RecordClass::IntraTaken: raw.intra_taken[key] += 1; break;
      case RecordClass::CallLike: raw.call_like[key] += 1; break;
      case RecordClass::ReturnLike: raw.return_like[key] += 1; break;
      }
      if (i == 0)
        raw.exec[src_range->id] += 1;
      if (i + 1 == sample.records.size())
        raw.exec[dst_range->id] += 1;
    }

    // Fall-through inference between consecutive records: everything in
    // [d1, s2] ran contiguously.
    for (std::size_t i = 0; i + 1 < sample.records.size(); ++i) {
      std::uint64_t d1 = sample.records[i].dst;
      std::uint64_t s2 = sample.records[i + 1].src;
      auto start_range = map.range_of(d1);
      auto end_range = map.range_of(s2);
      if (!start_range || !end_range)
        continue; // already counted as unmapped above
      if (end_range->start < start_range->start) {
        ++stats.inconsistent_pairs;
        continue;
      }
      // Walk address-adjacent blocks from d1's block to s2's block. The
      // walk must stay within one function; committed only if it arrives.
      std::vector<BlockId> walk{start_range->id};
      BlockMap::Range cur = *start_range;
      bool ok = true;
      while (cur.start != end_range->start) {
        auto next = map.range_at(cur.start + cur.size);
        if (!next || !same_function(next->id, cur.id)) {
          ok = false;
          break;
        }
        walk.push_back(next->id);
        cur = *next;
      }
      if (!ok) {
        ++stats.inconsistent_pairs;
        continue;
      }
      for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
        raw.fallthrough[{walk[k], walk[k + 1]}] += 1;
        raw.fell_through.insert(walk[k]);
      }
      for (const BlockId &b : walk)
        raw.exec[b] += 1;
    }
  }

  // Terminator inference from observed behavior.
  std::map<BlockId, TerminatorKind> term;
  std::map<BlockId, std::set<BlockId>> taken_targets;
  std::set<BlockId> has_call, has_ret;
  for (const auto &[key, n] : raw.intra_taken)
    taken_targets[key.first].insert(key.second);
  for (const auto &[key, n] : raw.call_like)
    has_call.insert(key.first);
  for (const auto &[key, n] : raw.return_like)
    has_ret.insert(key.first);

  WeightedICFG g;
  for (const auto &[start, range] : map.ranges()) {
    const BlockId &id = range.id;
    bool ft = raw.fell_through.count(id) != 0;
    std::size_t taken = taken_targets.count(id) ? taken_targets[id].size() : 0;
    TerminatorKind t;
    if (taken >= 1 && ft)
      t = TerminatorKind::CondBranch;
    else if (taken == 1)
      t = TerminatorKind::UncondJump;
    else if (taken >= 2)
      t = TerminatorKind::IndirectJump;
    else if (ft)
      t = TerminatorKind::FallthroughOnly;
    else if (has_call.count(id) && !has_ret.count(id))
      t = TerminatorKind::TailCall; // calls out, never continues
    else
      t = TerminatorKind::Return;

    BasicBlockInfo info;
    info.id = id;
    info.byte_size = range.size;
    info.exec_count = raw.exec.count(id) ? raw.exec[id] : 0;
    info.terminator = t;
    info.orig_address = range.start;
    g.add_block(info);
    term[id] = t;
  }

  for (const auto &[key, n] : raw.intra_taken) {
    EdgeKind kind = term[key.first] == TerminatorKind::CondBranch
                        ? EdgeKind::CondTaken
                        : EdgeKind::UncondJump;
    g.add_edge(key.first, key.second, kind, n);
  }
  for (const auto &[key, n] : raw.call_like) {
    EdgeKind kind = term[key.first] == TerminatorKind::TailCall
                        ? EdgeKind::TailCall
                        : EdgeKind::Call;
    g.add_edge(key.first, key.second, kind, n);
  }
  for (const auto &[key, n] : raw.return_like)
    g.add_edge(key.first, key.second, EdgeKind::Return, n);
  for (const auto &[key, n] : raw.fallthrough)
    g.add_edge(key.first, key.second, EdgeKind::Fallthrough, n);

  if (stats_out)
    *stats_out = stats;
  return g;
}

} // namespace stitchkit
