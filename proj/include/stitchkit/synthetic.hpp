// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Seeded synthetic program generator. Builds a call-heavy multi-function
// CFG whose hot paths branch over cold padding blocks, runs a block-level
// interpreter over it, and derives a flow-consistent profile, an execution
// trace, and optionally an address map with LBR records from the same walk.
// Fully deterministic for a fixed spec (raw engine draws only; no
// platform-dependent distributions).

#pragma once

#include <cstdint>
#include <vector>

#include "stitchkit/icfg.hpp"
#include "stitchkit/lbr.hpp"

namespace stitchkit {

struct SyntheticSpec {
  std::uint64_t seed = 1;
  std::uint32_t num_functions = 100; // excluding the driver stub
  std::uint32_t min_hot_blocks = 4;  // hot path length per function
  std::uint32_t max_hot_blocks = 10;
  std::uint32_t branch_skew_pct = 85; // likely-target probability
  std::uint32_t cold_pad_pct = 85;    // chance of padding after a hot step
  std::uint64_t min_pad_bytes = 3072; // cold padding size range
  std::uint64_t max_pad_bytes = 10240;
  std::uint32_t call_site_pct = 45;   // chance a hot step calls out
  std::uint32_t diamond_pct = 30;     // chance of a two-sided calling branch
  std::uint32_t tail_call_pct = 15;   // chance a function exits via tail call
  std::uint64_t trace_steps = 40000;  // block visits in the walk
  std::uint32_t max_call_depth = 24;
  std::uint32_t lbr_sample_len = 0; // records per sample; 0 = one big sample
};

struct SyntheticProgram {
  WeightedICFG graph;
  std::vector<BlockId> trace; // block visits, walk order
  BlockMap map;               // original-order addresses
  std::vector<LbrSample> lbr; // taken transfers of the same walk
};

SyntheticProgram generate_synthetic(const SyntheticSpec &spec);

} // namespace stitchkit
