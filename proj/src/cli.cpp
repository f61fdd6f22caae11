// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "stitchkit/error.hpp"
#include "stitchkit/pipeline.hpp"
#include "stitchkit/profile_io.hpp"
#include "stitchkit/report.hpp"
#include "stitchkit/synthetic.hpp"

namespace stitchkit::cli {

namespace {

struct CommonFlags {
  std::string config_path;
  std::string levels;
  std::int64_t hot_threshold = -1;
  std::string chaining;
  bool partial_order = false;
  bool json = false;
};

void add_common(CLI::App *cmd, CommonFlags &flags, bool with_pipeline_knobs) {
  cmd->add_option("--config", flags.config_path,
                  "configuration file (key=value lines)");
  cmd->add_option("--levels", flags.levels,
                  "distance levels, comma separated; K/M suffixes and 'inf'");
  if (with_pipeline_knobs) {
    cmd->add_option("--hot-threshold", flags.hot_threshold,
                    "execution count required for a block to be hot");
    cmd->add_option("--chaining", flags.chaining,
                    "chaining mode: greedy, cycle-cover, combined");
    cmd->add_flag("--partial-order", flags.partial_order,
                  "order chains for static branch prediction");
  }
  cmd->add_flag("--json", flags.json, "emit the report as one JSON object");
}

PipelineConfig resolve_config(const CommonFlags &flags) {
  PipelineConfig config;
  if (!flags.config_path.empty())
    config = load_config(flags.config_path);
  if (!flags.levels.empty())
    config.distance_levels = parse_distance_levels(flags.levels);
  if (flags.hot_threshold >= 0)
    config.hot_threshold = std::uint64_t(flags.hot_threshold);
  if (!flags.chaining.empty()) {
    auto mode = chaining_mode_from_string(flags.chaining);
    if (!mode)
      throw Error(ErrorKind::ConfigError,
                  "unknown chaining mode '" + flags.chaining + "'");
    config.chaining_mode = *mode;
  }
  if (flags.partial_order)
    config.enable_partial_order = true;
  return config;
}

void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
}

std::string chain_dump(const PathCover &cover,
                       const std::map<Arc, std::uint64_t> &arcs) {
  std::string out;
  for (const BBChain &chain : cover.chains) {
    std::uint64_t weight = 0;
    for (std::size_t i = 0; i + 1 < chain.blocks.size(); ++i) {
      auto it = arcs.find({chain.blocks[i], chain.blocks[i + 1]});
      if (it != arcs.end())
        weight += it->second;
    }
    out += "C " + std::to_string(weight);
    for (const BlockId &b : chain.blocks)
      out += " " + format_block_id(b);
    out += "\n";
  }
  return out;
}

// Blocks referenced by profile edges or the trace but absent from the layout.
std::vector<BlockId> missing_blocks(const Layout &layout, const WeightedICFG &g,
                                    const std::vector<BlockId> *trace) {
  std::set<BlockId> missing;
  for (const auto &[key, count] : g.edges()) {
    if (!layout.contains(key.src))
      missing.insert(key.src);
    if (!layout.contains(key.dst))
      missing.insert(key.dst);
  }
  if (trace)
    for (const BlockId &b : *trace)
      if (!layout.contains(b))
        missing.insert(b);
  return {missing.begin(), missing.end()};
}

int cmd_build(const std::vector<std::string> &edges, const std::string &lbr,
              const std::string &block_map, const std::string &out_path,
              std::ostream &out) {
  WeightedICFG g;
  for (const std::string &path : edges)
    g.merge(load_profile(path));
  LbrStats stats;
  if (!lbr.empty()) {
    if (block_map.empty())
      throw Error(ErrorKind::ConfigError, "--lbr requires --block-map");
    BlockMap map = load_block_map(block_map);
    g.merge(ingest_lbr(load_lbr_trace(lbr), map, &stats));
  }
  if (edges.empty() && lbr.empty())
    throw Error(ErrorKind::ConfigError,
                "no inputs: pass --edges and/or --lbr");
  save_profile(g, out_path);
  out << "blocks=" << g.num_blocks() << "\n";
  out << "edges=" << g.num_edges() << "\n";
  out << "total_weight=" << g.total_edge_weight() << "\n";
  if (!lbr.empty()) {
    out << "lbr_samples=" << stats.samples << "\n";
    out << "lbr_records=" << stats.records << "\n";
    out << "lbr_unmapped=" << stats.unmapped_records << "\n";
    out << "lbr_inconsistent=" << stats.inconsistent_pairs << "\n";
  }
  return 0;
}

int cmd_layout(const std::string &profile, const CommonFlags &flags,
               const std::string &out_path, const std::string &chains_out,
               std::ostream &out) {
  PipelineConfig config = resolve_config(flags);
  WeightedICFG g = load_profile(profile);
  CsResult result = run_cs_pipeline(g, config, config.enable_partial_order);
  if (!out_path.empty()) {
    std::ostringstream ss;
    save_layout_stream(result.layout, ss);
    write_text_file(out_path, ss.str());
  }
  if (!chains_out.empty()) {
    WeightedICFG hot = hot_subgraph(g, config.hot_threshold);
    write_text_file(chains_out,
                    chain_dump(result.chains,
                               build_chain_graphs(hot).merged().arcs));
  }
  LayoutMetrics m =
      compute_metrics(result.layout, g, config.distance_levels, nullptr,
                      config.cache, config.tlb);
  out << (flags.json ? metrics_json(m) : metrics_kv(m));
  if (!flags.json) {
    out << "chains=" << result.chains.chains.size() << "\n";
    out << "covered_weight=" << result.chains.covered_weight << "\n";
    out << "sequences=" << result.partial.sequences.size() << "\n";
  }
  return 0;
}

int cmd_eval(const std::string &layout_path, const std::string &profile,
             const std::string &trace_path, const CommonFlags &flags,
             std::ostream &out, std::ostream &err) {
  PipelineConfig config = resolve_config(flags);
  WeightedICFG g = load_profile(profile);
  Layout layout = load_layout(layout_path);
  std::vector<BlockId> trace;
  if (!trace_path.empty())
    trace = load_block_trace(trace_path);

  auto missing = missing_blocks(layout, g, trace.empty() ? nullptr : &trace);
  if (!missing.empty()) {
    err << "error: layout does not cover " << missing.size() << " block(s):";
    for (const BlockId &b : missing)
      err << " " << format_block_id(b);
    err << "\n";
    return 1;
  }

  LayoutMetrics m =
      compute_metrics(layout, g, config.distance_levels,
                      trace.empty() ? nullptr : &trace, config.cache,
                      config.tlb);
  if (flags.json) {
    out << metrics_json(m);
  } else {
    out << metrics_kv(m);
    out << metrics_table({{layout_path, m}});
  }
  return 0;
}

int cmd_compare(const std::string &profile, std::string strategies_csv,
                const std::string &trace_path, const CommonFlags &flags,
                std::ostream &out, std::ostream &err) {
  PipelineConfig config = resolve_config(flags);
  std::vector<std::string> strategies;
  if (strategies_csv.empty()) {
    strategies = config.strategies;
  } else {
    std::stringstream ss(strategies_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty())
        strategies.push_back(item);
  }
  for (const std::string &s : strategies)
    if (!is_known_strategy(s))
      throw Error(ErrorKind::UnknownStrategy, s);

  WeightedICFG g = load_profile(profile);
  std::vector<BlockId> trace;
  if (!trace_path.empty())
    trace = load_block_trace(trace_path);

  std::vector<std::pair<std::string, LayoutMetrics>> rows;
  for (const std::string &s : strategies) {
    Layout layout = layout_for_strategy(s, g, config);
    auto missing = missing_blocks(layout, g, trace.empty() ? nullptr : &trace);
    if (!missing.empty()) {
      err << "error: strategy " << s << " dropped " << missing.size()
          << " block(s)\n";
      return 1;
    }
    rows.emplace_back(s, compute_metrics(layout, g, config.distance_levels,
                                         trace.empty() ? nullptr : &trace,
                                         config.cache, config.tlb));
  }
  out << (flags.json ? metrics_json_rows(rows) : metrics_table(rows));
  return 0;
}

int cmd_gen_fixture(const SyntheticSpec &spec, const std::string &prefix,
                    bool with_trace, bool with_lbr, std::ostream &out) {
  SyntheticProgram prog = generate_synthetic(spec);
  save_profile(prog.graph, prefix + ".cfgprof");
  if (with_trace) {
    std::string text;
    for (const BlockId &b : prog.trace)
      text += format_block_id(b) + "\n";
    write_text_file(prefix + ".trace", text);
  }
  if (with_lbr) {
    std::string map_text;
    for (const auto &[start, range] : prog.map.ranges()) {
      char addr[17];
      std::snprintf(addr, sizeof addr, "%llx",
                    static_cast<unsigned long long>(range.start));
      map_text += "M " + std::string(addr) + " " +
                  std::to_string(range.size) + " " + format_block_id(range.id) +
                  "\n";
    }
    write_text_file(prefix + ".map", map_text);
    std::string lbr_text;
    for (const LbrSample &sample : prog.lbr) {
      for (std::size_t i = 0; i < sample.records.size(); ++i) {
        char rec[40];
        std::snprintf(rec, sizeof rec, "%llx->%llx",
                      static_cast<unsigned long long>(sample.records[i].src),
                      static_cast<unsigned long long>(sample.records[i].dst));
        if (i)
          lbr_text += ' ';
        lbr_text += rec;
      }
      lbr_text += '\n';
    }
    write_text_file(prefix + ".lbr", lbr_text);
  }
  out << "blocks=" << prog.graph.num_blocks() << "\n";
  out << "edges=" << prog.graph.num_edges() << "\n";
  out << "trace_len=" << prog.trace.size() << "\n";
  return 0;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"profile-guided inter-procedural basic block layout toolkit",
               "stitchkit"};
  app.require_subcommand(1);

  // build
  auto *build = app.add_subcommand("build", "ingest profiles into cfgprof v1");
  std::vector<std::string> edges;
  std::string lbr, block_map, build_out;
  build->add_option("--edges", edges, "edge-profile file; repeatable");
  build->add_option("--lbr", lbr, "LBR trace file");
  build->add_option("--block-map", block_map, "address range map for --lbr");
  build->add_option("--out", build_out, "output cfgprof path")->required();

  // layout
  auto *layout = app.add_subcommand("layout", "compute the stitched layout");
  std::string layout_profile, layout_out, chains_out;
  CommonFlags layout_flags;
  layout->add_option("profile", layout_profile, "cfgprof input")->required();
  layout->add_option("--out", layout_out, "output cslayout path");
  layout->add_option("--chains-out", chains_out, "dump BB chains to a file");
  add_common(layout, layout_flags, true);

  // eval
  auto *eval = app.add_subcommand("eval", "score a layout against a profile");
  std::string eval_layout, eval_profile, eval_trace;
  CommonFlags eval_flags;
  eval->add_option("--layout", eval_layout, "cslayout file")->required();
  eval->add_option("--profile", eval_profile, "cfgprof file")->required();
  eval->add_option("--trace", eval_trace, "block execution trace");
  add_common(eval, eval_flags, false);

  // compare
  auto *compare =
      app.add_subcommand("compare", "score several strategies side by side");
  std::string cmp_profile, cmp_strategies, cmp_trace;
  CommonFlags cmp_flags;
  compare->add_option("--profile", cmp_profile, "cfgprof file")->required();
  compare->add_option("--strategies", cmp_strategies,
                      "comma list: cs,cs-po,ph,ph-bb,c3,original");
  compare->add_option("--trace", cmp_trace, "block execution trace");
  add_common(compare, cmp_flags, true);

  // gen-fixture
  auto *gen = app.add_subcommand("gen-fixture", "generate a synthetic program");
  SyntheticSpec spec;
  std::string gen_prefix;
  bool gen_trace = false, gen_lbr = false;
  gen->add_option("--seed", spec.seed, "random seed");
  gen->add_option("--functions", spec.num_functions, "function count");
  gen->add_option("--min-blocks", spec.min_hot_blocks, "min hot path length");
  gen->add_option("--max-blocks", spec.max_hot_blocks, "max hot path length");
  gen->add_option("--skew", spec.branch_skew_pct, "likely-branch bias, percent");
  gen->add_option("--cold-pct", spec.cold_pad_pct, "cold padding chance");
  gen->add_option("--pad-min", spec.min_pad_bytes, "min cold pad bytes");
  gen->add_option("--pad-max", spec.max_pad_bytes, "max cold pad bytes");
  gen->add_option("--call-pct", spec.call_site_pct, "call site chance");
  gen->add_option("--diamond-pct", spec.diamond_pct,
                  "two-sided calling branch chance");
  gen->add_option("--tail-pct", spec.tail_call_pct, "tail-call exit chance");
  gen->add_option("--steps", spec.trace_steps, "walk length in block visits");
  gen->add_option("--sample-len", spec.lbr_sample_len,
                  "records per LBR sample; 0 = one sample");
  gen->add_option("--out", gen_prefix, "output path prefix")->required();
  gen->add_flag("--trace", gen_trace, "also write <prefix>.trace");
  gen->add_flag("--lbr", gen_lbr, "also write <prefix>.map and <prefix>.lbr");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    if (build->parsed())
      return cmd_build(edges, lbr, block_map, build_out, out);
    if (layout->parsed())
      return cmd_layout(layout_profile, layout_flags, layout_out, chains_out,
                        out);
    if (eval->parsed())
      return cmd_eval(eval_layout, eval_profile, eval_trace, eval_flags, out,
                      err);
    if (compare->parsed())
      return cmd_compare(cmp_profile, cmp_strategies, cmp_trace, cmp_flags,
                         out, err);
    if (gen->parsed())
      return cmd_gen_fixture(spec, gen_prefix, gen_trace, gen_lbr, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace stitchkit::cli
