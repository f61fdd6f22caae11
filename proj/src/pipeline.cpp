// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/pipeline.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "stitchkit/error.hpp"
#include "stitchkit/partial_order.hpp"

namespace stitchkit {

std::string_view to_string(ChainingMode mode) {
  switch (mode) {
  case ChainingMode::Greedy: return "greedy";
  case ChainingMode::CycleCover: return "cycle-cover";
  case ChainingMode::Combined: return "combined";
  }
  return "combined";
}

std::optional<ChainingMode> chaining_mode_from_string(std::string_view s) {
  if (s == "greedy")
    return ChainingMode::Greedy;
  if (s == "cycle-cover" || s == "cycle")
    return ChainingMode::CycleCover;
  if (s == "combined")
    return ChainingMode::Combined;
  return std::nullopt;
}

std::vector<std::uint64_t> parse_distance_levels(const std::string &text) {
  std::vector<std::uint64_t> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      throw Error(ErrorKind::ConfigError, "empty distance level");
    if (item == "inf") {
      levels.push_back(std::numeric_limits<std::uint64_t>::max());
      continue;
    }
    std::uint64_t mult = 1;
    char suffix = item.back();
    if (suffix == 'K' || suffix == 'k') {
      mult = 1024;
      item.pop_back();
    } else if (suffix == 'M' || suffix == 'm') {
      mult = 1024 * 1024;
      item.pop_back();
    }
    try {
      std::size_t pos = 0;
      std::uint64_t v = std::stoull(item, &pos);
      if (pos != item.size())
        throw std::invalid_argument(item);
      levels.push_back(v * mult);
    } catch (const std::exception &) {
      throw Error(ErrorKind::ConfigError, "bad distance level '" + item + "'");
    }
  }
  if (levels.empty())
    throw Error(ErrorKind::EmptyLevels, "no distance levels given");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw Error(ErrorKind::ConfigError,
                  "distance levels must be strictly increasing");
  if (levels.front() == 0)
    throw Error(ErrorKind::ConfigError, "distance levels must be positive");
  return levels;
}

std::string format_distance_levels(const std::vector<std::uint64_t> &levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(levels[i]);
  }
  return out;
}

std::string PipelineConfig::serialize() const {
  std::string out;
  out += "distance_levels=" + format_distance_levels(distance_levels) + "\n";
  out += "hot_threshold=" + std::to_string(hot_threshold) + "\n";
  out += "enable_partial_order=" +
         std::string(enable_partial_order ? "true" : "false") + "\n";
  out += "chaining_mode=" + std::string(to_string(chaining_mode)) + "\n";
  out += "strategies=";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (i)
      out += ',';
    out += strategies[i];
  }
  out += "\n";
  out += "cache_line_size=" + std::to_string(cache.line_size) + "\n";
  out += "cache_num_sets=" + std::to_string(cache.num_sets) + "\n";
  out += "cache_associativity=" + std::to_string(cache.associativity) + "\n";
  out += "tlb_page_size=" + std::to_string(tlb.page_size) + "\n";
  out += "tlb_entries=" + std::to_string(tlb.entries) + "\n";
  out += "tlb_associativity=" + std::to_string(tlb.associativity) + "\n";
  out += "c3_size_cap=" + std::to_string(c3_size_cap) + "\n";
  out += "max_assignment_vertices=" + std::to_string(max_assignment_vertices) +
         "\n";
  out += "min_bpp=" + std::to_string(min_bpp) + "\n";
  out += "seed=" + std::to_string(seed) + "\n";
  return out;
}

PipelineConfig parse_config(std::istream &in, const std::string &name) {
  PipelineConfig config;
  std::string line;
  std::size_t lineno = 0;
  auto to_u64 = [&](const std::string &v) {
    try {
      std::size_t pos = 0;
      std::uint64_t r = std::stoull(v, &pos);
      if (pos != v.size())
        throw std::invalid_argument(v);
      return r;
    } catch (const std::exception &) {
      throw Error(ErrorKind::ConfigError, name + ":" + std::to_string(lineno) +
                                              ": bad number '" + v + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    // trim
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError,
                  name + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "distance_levels") {
      config.distance_levels = parse_distance_levels(value);
    } else if (key == "hot_threshold") {
      config.hot_threshold = to_u64(value);
    } else if (key == "enable_partial_order") {
      if (value != "true" && value != "false")
        throw Error(ErrorKind::ConfigError,
                    name + ":" + std::to_string(lineno) + ": expected bool");
      config.enable_partial_order = value == "true";
    } else if (key == "chaining_mode") {
      auto mode = chaining_mode_from_string(value);
      if (!mode)
        throw Error(ErrorKind::ConfigError, name + ":" +
                                                std::to_string(lineno) +
                                                ": unknown chaining mode");
      config.chaining_mode = *mode;
    } else if (key == "strategies") {
      config.strategies.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty())
          config.strategies.push_back(item);
    } else if (key == "cache_line_size") {
      config.cache.line_size = to_u64(value);
    } else if (key == "cache_num_sets") {
      config.cache.num_sets = to_u64(value);
    } else if (key == "cache_associativity") {
      config.cache.associativity = to_u64(value);
    } else if (key == "tlb_page_size") {
      config.tlb.page_size = to_u64(value);
    } else if (key == "tlb_entries") {
      config.tlb.entries = to_u64(value);
    } else if (key == "tlb_associativity") {
      config.tlb.associativity = to_u64(value);
    } else if (key == "c3_size_cap") {
      config.c3_size_cap = to_u64(value);
    } else if (key == "max_assignment_vertices") {
      config.max_assignment_vertices = to_u64(value);
    } else if (key == "min_bpp") {
      config.min_bpp = std::int64_t(to_u64(value));
    } else if (key == "seed") {
      config.seed = to_u64(value);
    } else {
      throw Error(ErrorKind::ConfigError, name + ":" + std::to_string(lineno) +
                                              ": unknown key '" + key + "'");
    }
  }
  if (config.tlb.entries % config.tlb.associativity != 0)
    throw Error(ErrorKind::ConfigError,
                "tlb entries must be divisible by associativity");
  return config;
}

PipelineConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::IoError, "cannot open " + path);
  return parse_config(in, path);
}

CsResult run_cs_pipeline(const WeightedICFG &g, const PipelineConfig &config,
                         bool with_partial_order) {
  CsResult result;
  WeightedICFG hot = hot_subgraph(g, config.hot_threshold);
  std::vector<BlockId> cold = cold_blocks(g, config.hot_threshold);

  ChainGraphSet set = build_chain_graphs(hot);
  result.chains = run_chaining(config.chaining_mode, set, hot,
                               config.max_assignment_vertices);

  const ChainOrder *order = nullptr;
  if (with_partial_order) {
    result.order = partial_order(result.chains, hot, config.min_bpp);
    order = &result.order;
  }

  result.partial = hierarchical_layout(result.chains, config.distance_levels,
                                       order, hot);
  result.layout = finalize(result.partial, cold, g, order);
  return result;
}

bool is_known_strategy(const std::string &strategy) {
  return strategy == "cs" || strategy == "cs-po" || strategy == "ph" ||
         strategy == "ph-bb" || strategy == "c3" || strategy == "original";
}

Layout layout_for_strategy(const std::string &strategy, const WeightedICFG &g,
                           const PipelineConfig &config) {
  if (strategy == "cs")
    return run_cs_pipeline(g, config, false).layout;
  if (strategy == "cs-po")
    return run_cs_pipeline(g, config, true).layout;
  if (strategy == "ph")
    return baseline_ph_functions(g);
  if (strategy == "ph-bb")
    return baseline_ph_bb(g, config.hot_threshold);
  if (strategy == "c3")
    return baseline_c3(g, config.c3_size_cap);
  if (strategy == "original")
    return original_layout(g);
  throw Error(ErrorKind::UnknownStrategy, strategy);
}

} // namespace stitchkit
