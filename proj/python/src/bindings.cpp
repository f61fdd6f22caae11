// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings over the core pipeline: profile ingestion, chaining,
// hierarchical collocation, baselines, and layout evaluation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stitchkit/baselines.hpp"
#include "stitchkit/chaining.hpp"
#include "stitchkit/collocation.hpp"
#include "stitchkit/error.hpp"
#include "stitchkit/evaluation.hpp"
#include "stitchkit/lbr.hpp"
#include "stitchkit/partial_order.hpp"
#include "stitchkit/pipeline.hpp"
#include "stitchkit/profile_io.hpp"
#include "stitchkit/synthetic.hpp"

namespace py = pybind11;
using namespace stitchkit;

namespace {

py::dict metrics_dict(const LayoutMetrics &m) {
  py::dict d;
  d["total_transfers"] = m.total_transfers;
  py::dict close;
  for (const auto &[dist, count] : m.d_close_counts)
    close[py::int_(dist)] = count;
  d["d_close_counts"] = close;
  d["adjacent_transfers"] = m.adjacent_transfers;
  d["simulated_icache_mpki"] =
      m.simulated_icache_mpki ? py::object(py::float_(*m.simulated_icache_mpki))
                              : py::none();
  d["simulated_itlb_mpki"] =
      m.simulated_itlb_mpki ? py::object(py::float_(*m.simulated_itlb_mpki))
                            : py::none();
  return d;
}

ChainGraph chain_graph_from_arcs(
    const std::vector<std::uint64_t> &vertices,
    const std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>
        &arcs) {
  ChainGraph g;
  for (std::uint64_t v : vertices)
    g.vertices.push_back(BlockId::unpack(v));
  for (const auto &[src, dst, w] : arcs)
    g.arcs[{BlockId::unpack(src), BlockId::unpack(dst)}] += w;
  return g;
}

py::list cover_to_list(const PathCover &cover) {
  py::list chains;
  for (const BBChain &chain : cover.chains) {
    py::list blocks;
    for (const BlockId &b : chain.blocks)
      blocks.append(b.pack());
    chains.append(blocks);
  }
  return chains;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "profile-guided inter-procedural basic block layout toolkit";

  py::register_exception<Error>(m, "StitchkitError");

  py::class_<BlockId>(m, "BlockId")
      .def(py::init([](std::uint16_t module, std::uint32_t function,
                       std::uint16_t index) {
             return BlockId{module, function, index};
           }),
           py::arg("module_tag") = 0, py::arg("function_id") = 0,
           py::arg("block_index") = 0)
      .def_readwrite("module_tag", &BlockId::module_tag)
      .def_readwrite("function_id", &BlockId::function_id)
      .def_readwrite("block_index", &BlockId::block_index)
      .def("pack", &BlockId::pack)
      .def_static("unpack", &BlockId::unpack)
      .def("__eq__", [](const BlockId &a, const BlockId &b) { return a == b; })
      .def("__hash__", [](const BlockId &a) { return a.pack(); })
      .def("__repr__", [](const BlockId &a) {
        return "BlockId(" + format_block_id(a) + ")";
      });

  py::class_<WeightedICFG>(m, "WeightedICFG")
      .def(py::init<>())
      .def_property_readonly("num_blocks", &WeightedICFG::num_blocks)
      .def_property_readonly("num_edges", &WeightedICFG::num_edges)
      .def_property_readonly("total_edge_weight",
                             &WeightedICFG::total_edge_weight)
      .def("merge", &WeightedICFG::merge)
      .def("block_ids",
           [](const WeightedICFG &g) {
             py::list out;
             for (const auto &[id, info] : g.blocks())
               out.append(id.pack());
             return out;
           })
      .def("edge_list", [](const WeightedICFG &g) {
        py::list out;
        for (const auto &[key, count] : g.edges())
          out.append(py::make_tuple(key.src.pack(), key.dst.pack(),
                                    std::string(to_string(key.kind)), count));
        return out;
      });

  py::class_<Layout>(m, "Layout")
      .def_property_readonly("total_size", &Layout::total_size)
      .def("entries",
           [](const Layout &l) {
             py::list out;
             for (const auto &e : l.entries)
               out.append(py::make_tuple(e.id.pack(), e.offset, e.size));
             return out;
           })
      .def("rank_of",
           [](const Layout &l, std::uint64_t packed) {
             return l.rank_of(BlockId::unpack(packed));
           })
      .def("__len__", [](const Layout &l) { return l.entries.size(); });

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("distance_levels", &PipelineConfig::distance_levels)
      .def_readwrite("hot_threshold", &PipelineConfig::hot_threshold)
      .def_readwrite("enable_partial_order",
                     &PipelineConfig::enable_partial_order)
      .def_readwrite("c3_size_cap", &PipelineConfig::c3_size_cap)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_property(
          "chaining_mode",
          [](const PipelineConfig &c) {
            return std::string(to_string(c.chaining_mode));
          },
          [](PipelineConfig &c, const std::string &s) {
            auto mode = chaining_mode_from_string(s);
            if (!mode)
              throw Error(ErrorKind::ConfigError,
                          "unknown chaining mode '" + s + "'");
            c.chaining_mode = *mode;
          })
      .def("serialize", &PipelineConfig::serialize);

  py::class_<CacheConfig>(m, "CacheConfig")
      .def(py::init<>())
      .def_readwrite("line_size", &CacheConfig::line_size)
      .def_readwrite("num_sets", &CacheConfig::num_sets)
      .def_readwrite("associativity", &CacheConfig::associativity);

  py::class_<TlbConfig>(m, "TlbConfig")
      .def(py::init<>())
      .def_readwrite("page_size", &TlbConfig::page_size)
      .def_readwrite("entries", &TlbConfig::entries)
      .def_readwrite("associativity", &TlbConfig::associativity);

  m.def("load_profile", &load_profile, py::arg("path"));
  m.def("save_profile", &save_profile, py::arg("graph"), py::arg("path"));
  m.def("load_layout", &load_layout, py::arg("path"));
  m.def("save_layout", &save_layout, py::arg("layout"), py::arg("path"));
  m.def(
      "ingest_lbr_files",
      [](const std::string &lbr_path, const std::string &map_path) {
        BlockMap map = load_block_map(map_path);
        LbrStats stats;
        WeightedICFG g = ingest_lbr(load_lbr_trace(lbr_path), map, &stats);
        py::dict info;
        info["samples"] = stats.samples;
        info["records"] = stats.records;
        info["unmapped_records"] = stats.unmapped_records;
        info["inconsistent_pairs"] = stats.inconsistent_pairs;
        return py::make_tuple(g, info);
      },
      py::arg("lbr_path"), py::arg("block_map_path"));

  m.def("hot_subgraph", &hot_subgraph, py::arg("graph"), py::arg("threshold"));
  m.def("default_distance_levels",
        [] { return default_distance_levels(); });

  m.def(
      "chain_greedy",
      [](const std::vector<std::uint64_t> &vertices,
         const std::vector<std::tuple<std::uint64_t, std::uint64_t,
                                      std::uint64_t>> &arcs) {
        PathCover cover = chain_greedy(chain_graph_from_arcs(vertices, arcs));
        return py::make_tuple(cover_to_list(cover), cover.covered_weight);
      },
      py::arg("vertices"), py::arg("arcs"));
  m.def(
      "chain_cycle_cover",
      [](const std::vector<std::uint64_t> &vertices,
         const std::vector<std::tuple<std::uint64_t, std::uint64_t,
                                      std::uint64_t>> &arcs) {
        PathCover cover =
            chain_cycle_cover(chain_graph_from_arcs(vertices, arcs));
        return py::make_tuple(cover_to_list(cover), cover.covered_weight);
      },
      py::arg("vertices"), py::arg("arcs"));

  m.def(
      "cs_layout",
      [](const WeightedICFG &g, const PipelineConfig &config,
         bool with_partial_order) {
        return run_cs_pipeline(g, config, with_partial_order).layout;
      },
      py::arg("graph"), py::arg("config") = PipelineConfig{},
      py::arg("with_partial_order") = false);
  m.def("layout_for_strategy", &layout_for_strategy, py::arg("strategy"),
        py::arg("graph"), py::arg("config") = PipelineConfig{});

  m.def("count_d_close",
        [](const Layout &layout, const WeightedICFG &g, std::uint64_t d) {
          return count_d_close(layout, g, d);
        });
  m.def("count_adjacent", [](const Layout &layout, const WeightedICFG &g) {
    return count_adjacent(layout, g);
  });
  m.def(
      "compute_metrics",
      [](const Layout &layout, const WeightedICFG &g,
         const std::vector<std::uint64_t> &levels,
         const std::vector<std::uint64_t> &trace, const CacheConfig &cache,
         const TlbConfig &tlb) {
        std::vector<BlockId> blocks;
        blocks.reserve(trace.size());
        for (std::uint64_t packed : trace)
          blocks.push_back(BlockId::unpack(packed));
        LayoutMetrics m =
            compute_metrics(layout, g, levels,
                            blocks.empty() ? nullptr : &blocks, cache, tlb);
        return metrics_dict(m);
      },
      py::arg("layout"), py::arg("graph"), py::arg("levels"),
      py::arg("trace") = std::vector<std::uint64_t>{},
      py::arg("cache") = CacheConfig{}, py::arg("tlb") = TlbConfig{});

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("seed", &SyntheticSpec::seed)
      .def_readwrite("num_functions", &SyntheticSpec::num_functions)
      .def_readwrite("min_hot_blocks", &SyntheticSpec::min_hot_blocks)
      .def_readwrite("max_hot_blocks", &SyntheticSpec::max_hot_blocks)
      .def_readwrite("branch_skew_pct", &SyntheticSpec::branch_skew_pct)
      .def_readwrite("call_site_pct", &SyntheticSpec::call_site_pct)
      .def_readwrite("trace_steps", &SyntheticSpec::trace_steps)
      .def_readwrite("lbr_sample_len", &SyntheticSpec::lbr_sample_len);

  m.def(
      "generate_synthetic",
      [](const SyntheticSpec &spec) {
        SyntheticProgram prog = generate_synthetic(spec);
        py::list trace;
        for (const BlockId &b : prog.trace)
          trace.append(b.pack());
        return py::make_tuple(std::move(prog.graph), trace);
      },
      py::arg("spec"));

  m.def("profile_to_string", [](const WeightedICFG &g) {
    std::ostringstream ss;
    save_profile_stream(g, ss);
    return ss.str();
  });
}
