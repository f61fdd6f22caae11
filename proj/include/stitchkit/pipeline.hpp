// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Reproducible pipeline configuration and the strategy runner used by the
// CLI: ingest -> chain -> order -> layout -> evaluate -> compare.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stitchkit/baselines.hpp"
#include "stitchkit/chaining.hpp"
#include "stitchkit/collocation.hpp"
#include "stitchkit/evaluation.hpp"

namespace stitchkit {

struct PipelineConfig {
  std::vector<std::uint64_t> distance_levels = default_distance_levels();
  std::uint64_t hot_threshold = 1;
  bool enable_partial_order = false;
  ChainingMode chaining_mode = ChainingMode::Combined;
  std::vector<std::string> strategies = {"cs", "ph", "ph-bb", "c3", "original"};
  CacheConfig cache;
  TlbConfig tlb;
  std::uint64_t c3_size_cap = 4096;
  std::uint64_t max_assignment_vertices = 2000;
  std::int64_t min_bpp = 0;
  std::uint64_t seed = 1;

  /// key=value lines; round-trips through parse_config exactly.
  std::string serialize() const;
};

PipelineConfig parse_config(std::istream &in, const std::string &name);
PipelineConfig load_config(const std::string &path);

/// "4096,32K,2M" -> bytes; suffixes K and M multiply by 2^10 / 2^20.
std::vector<std::uint64_t> parse_distance_levels(const std::string &text);
std::string format_distance_levels(const std::vector<std::uint64_t> &levels);

std::string_view to_string(ChainingMode mode);
std::optional<ChainingMode> chaining_mode_from_string(std::string_view s);

/// The stitchkit pipeline: hot/cold split, chaining, optional chain partial
/// ordering, hierarchical collocation, density finalization.
struct CsResult {
  PathCover chains;
  ChainOrder order; // empty unless enable_partial_order
  PartialLayout partial;
  Layout layout;
};

CsResult run_cs_pipeline(const WeightedICFG &g, const PipelineConfig &config,
                         bool with_partial_order);

/// Strategy names: cs, cs-po, ph, ph-bb, c3, original. Throws
/// UnknownStrategy otherwise.
Layout layout_for_strategy(const std::string &strategy, const WeightedICFG &g,
                           const PipelineConfig &config);

bool is_known_strategy(const std::string &strategy);

} // namespace stitchkit
