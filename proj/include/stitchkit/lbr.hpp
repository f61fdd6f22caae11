// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// LBR-style trace ingestion. The hardware records every taken control
// transfer; everything between the target of one record and the source of
// the next executed contiguously, which is where fall-through counts come
// from.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "stitchkit/icfg.hpp"

namespace stitchkit {

/// One sampled LBR stack: (branch source, branch target) address pairs,
/// oldest first.
struct LbrSample {
  struct Record {
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
  };
  std::vector<Record> records;
};

/// Maps disjoint address ranges to block ids. Ranges carry the block size.
class BlockMap {
public:
  /// Throws InvariantViolation if the new range overlaps an existing one.
  void add(std::uint64_t start, std::uint64_t size, const BlockId &id);

  /// Block whose [start, start+size) range contains `addr`.
  std::optional<BlockId> resolve(std::uint64_t addr) const;

  struct Range {
    std::uint64_t start = 0;
    std::uint64_t size = 0;
    BlockId id;
  };

  std::optional<Range> range_of(std::uint64_t addr) const;
  /// Range starting exactly at `addr`, if any (used for adjacency walks).
  std::optional<Range> range_at(std::uint64_t addr) const;

  std::size_t size() const { return ranges_.size(); }
  const std::map<std::uint64_t, Range> &ranges() const { return ranges_; }

private:
  std::map<std::uint64_t, Range> ranges_; // keyed by start address
};

/// Non-fatal per-ingestion counters. Malformed input never throws; it is
/// skipped and counted here.
struct LbrStats {
  std::uint64_t samples = 0;
  std::uint64_t records = 0;
  std::uint64_t unmapped_records = 0;   // address outside every range
  std::uint64_t inconsistent_pairs = 0; // fall-through walk impossible
};

/// Rebuilds a weighted ICFG from branch samples. Each record increments the
/// resolved branch edge by one; each consecutive record pair within a sample
/// contributes fall-through edges along the contiguous range [d1, s2].
/// Terminators and edge kinds are inferred from observed behavior and
/// address adjacency.
WeightedICFG ingest_lbr(const std::vector<LbrSample> &samples,
                        const BlockMap &map, LbrStats *stats = nullptr);

} // namespace stitchkit
