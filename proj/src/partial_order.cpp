// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/partial_order.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stitchkit/error.hpp"

namespace stitchkit {

ChainOrder::ChainOrder(std::size_t n)
    : n_(n), words_((n + 63) / 64), succ_(n * ((n + 63) / 64), 0) {}

bool ChainOrder::before(std::size_t a, std::size_t b) const {
  return a < n_ && b < n_ && bit(a, b);
}

bool ChainOrder::try_add(std::size_t a, std::size_t b) {
  if (a >= n_ || b >= n_ || a == b)
    return false;
  if (bit(b, a))
    return false; // would break antisymmetry
  if (bit(a, b))
    return true; // already implied
  // close transitively: every x with x <= a (or x == a) now precedes b and
  // everything b precedes.
  for (std::size_t x = 0; x < n_; ++x) {
    if (x != a && !bit(x, a))
      continue;
    std::uint64_t *row = &succ_[x * words_];
    const std::uint64_t *brow = &succ_[b * words_];
    for (std::size_t wd = 0; wd < words_; ++wd)
      row[wd] |= brow[wd];
    set_bit(x, b);
  }
  return true;
}

bool ChainOrder::is_strict_partial_order() const {
  for (std::size_t a = 0; a < n_; ++a) {
    if (bit(a, a))
      return false;
    for (std::size_t b = 0; b < n_; ++b) {
      if (!bit(a, b))
        continue;
      if (bit(b, a))
        return false;
      for (std::size_t c = 0; c < n_; ++c)
        if (bit(b, c) && !bit(a, c))
          return false;
    }
  }
  return true;
}

std::size_t ChainOrder::relation_count() const {
  std::size_t count = 0;
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t wd = 0; wd < words_; ++wd)
      count += std::size_t(__builtin_popcountll(succ_[a * words_ + wd]));
  return count;
}

namespace {

// Branch facts for a two-way conditional block: at most one taken edge, at
// most one fall-through edge, at least one of them recorded.
std::optional<BranchInfo> branch_info(const WeightedICFG &g, const BlockId &b) {
  if (!g.has_block(b) || g.block(b).terminator != TerminatorKind::CondBranch)
    return std::nullopt;
  std::optional<BlockId> taken, fall;
  std::uint64_t taken_count = 0, fall_count = 0;
  auto lo = g.edges().lower_bound(EdgeKey{b, BlockId::unpack(0), EdgeKind{}});
  for (auto it = lo; it != g.edges().end() && it->first.src == b; ++it) {
    const EdgeKey &key = it->first;
    if (key.kind == EdgeKind::CondTaken) {
      if (taken)
        return std::nullopt; // more than two-way
      taken = key.dst;
      taken_count = it->second;
    } else if (key.kind == EdgeKind::Fallthrough) {
      if (fall)
        return std::nullopt;
      fall = key.dst;
      fall_count = it->second;
    } else if (key.kind == EdgeKind::UncondJump) {
      return std::nullopt;
    }
  }
  if (!taken && !fall)
    return std::nullopt;
  BranchInfo info;
  info.block = b;
  if (taken_count > fall_count) {
    info.likely = *taken;
    info.unlikely = fall;
    info.divergence = std::int64_t(taken_count - fall_count);
  } else {
    // Ties resolve toward the fall-through successor.
    info.likely = *fall;
    info.unlikely = taken;
    info.divergence = std::int64_t(fall_count - taken_count);
  }
  return info;
}

} // namespace

std::int64_t compute_bd(const WeightedICFG &g, const BlockId &b) {
  auto info = branch_info(g, b);
  if (!info)
    throw Error(ErrorKind::NotABranch,
                format_block_id(b) +
                    " does not have exactly two outgoing branch edges");
  return info->divergence;
}

std::vector<BranchInfo> collect_branches(const WeightedICFG &g) {
  std::vector<BranchInfo> out;
  for (const auto &[id, block] : g.blocks())
    if (auto info = branch_info(g, id))
      out.push_back(*info);
  return out;
}

std::int64_t compute_bpp(const std::vector<BlockId> &s,
                         const std::vector<BlockId> &t,
                         const WeightedICFG &g) {
  std::set<BlockId> in_s(s.begin(), s.end());
  std::set<BlockId> in_t(t.begin(), t.end());
  std::int64_t profit = 0;
  auto add = [&](const std::vector<BlockId> &blocks, bool blocks_are_s) {
    for (const BlockId &b : blocks) {
      auto info = branch_info(g, b);
      if (!info)
        continue;
      const auto &other = blocks_are_s ? in_t : in_s;
      // b in S: +BD when the unlikely target lands in T (forward not-taken),
      // -BD when the likely one does (forward taken). Mirrored for b in T.
      std::int64_t sign = blocks_are_s ? 1 : -1;
      if (info->unlikely && other.count(*info->unlikely))
        profit += sign * info->divergence;
      if (other.count(info->likely))
        profit -= sign * info->divergence;
    }
  };
  add(s, true);
  add(t, false);
  return profit;
}

ChainOrder partial_order(const PathCover &cover, const WeightedICFG &g,
                         std::int64_t min_bpp) {
  const std::size_t n = cover.chains.size();
  ChainOrder order(n);

  std::map<BlockId, std::size_t> chain_of;
  for (std::size_t c = 0; c < n; ++c)
    for (const BlockId &b : cover.chains[c].blocks)
      chain_of.emplace(b, c);

  // Accumulate the four BPP terms per ordered chain pair from every branch
  // with a cross-chain target.
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> bpp;
  for (const BranchInfo &br : collect_branches(g)) {
    auto bc = chain_of.find(br.block);
    if (bc == chain_of.end())
      continue;
    std::size_t cb = bc->second;
    auto add_target = [&](const BlockId &target, std::int64_t sign) {
      auto tc = chain_of.find(target);
      if (tc == chain_of.end() || tc->second == cb)
        return;
      bpp[{cb, tc->second}] += sign * br.divergence;
      bpp[{tc->second, cb}] -= sign * br.divergence;
    };
    if (br.unlikely)
      add_target(*br.unlikely, +1); // b in S, f_b in T: S before T profits
    add_target(br.likely, -1);      // b in S, t_b in T: S before T costs
  }

  struct Candidate {
    std::int64_t profit;
    std::size_t first, second;
  };
  std::vector<Candidate> candidates;
  for (const auto &[pair, profit] : bpp)
    if (profit > min_bpp)
      candidates.push_back({profit, pair.first, pair.second});
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.profit != b.profit)
                return a.profit > b.profit;
              return std::pair(a.first, a.second) < std::pair(b.first, b.second);
            });
  for (const Candidate &c : candidates)
    order.try_add(c.first, c.second);
  return order;
}

} // namespace stitchkit
