// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Reference layouts to compare against: the original order, Pettis-Hansen
// function reordering (function granularity), Pettis-Hansen basic block
// reordering (hot/cold split + per-function chaining + function reordering),
// and call-chain clustering.

#pragma once

#include <cstdint>

#include "stitchkit/layout.hpp"

namespace stitchkit {

/// Blocks in original per-function order: functions ascending by id, blocks
/// ascending by index.
Layout original_layout(const WeightedICFG &g);

/// Greedy call-graph coarsening by heaviest call weight. On each merge the
/// orientation maximizing the call weight between the blocks meeting at the
/// seam is chosen. Whole functions stay contiguous; blocks within a function
/// keep their intra-function chained order.
Layout baseline_ph_functions(const WeightedICFG &g);

/// Hot/cold split per function, greedy intra-function chaining, hot parts
/// coalesced per function and PH-reordered, cold parts appended.
Layout baseline_ph_bb(const WeightedICFG &g, std::uint64_t hot_threshold = 1);

/// Call-chain clustering: functions in decreasing hotness (incoming call
/// weight) append their cluster after their most frequent caller's cluster
/// while the combined size stays within the cap; leftover clusters sort by
/// execution density.
Layout baseline_c3(const WeightedICFG &g, std::uint64_t size_cap = 4096);

} // namespace stitchkit
