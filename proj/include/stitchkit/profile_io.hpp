// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Text formats. All of them are line-oriented, permit `#` comments and
// blank lines, and use lowercase hex for packed ids.
//
//   cfgprof v1                               profile (blocks + edges)
//     B <tag:hex4> <func:hex8> <idx:hex4> <size:dec> <exec:dec> <term> [<addr:hex>]
//     E <src:hex16> <dst:hex16> <kind> <count:dec>
//   M <start:hex> <size:dec> <id:hex16>     block map (one line per block)
//   <src:hex>-><dst:hex> ...                LBR samples (one per line, oldest first)
//   <id:hex16>                              execution trace (one block per line)
//   cslayout v1                              layout
//     L <rank:dec> <id:hex16> <offset:dec> <size:dec>

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stitchkit/icfg.hpp"
#include "stitchkit/lbr.hpp"

namespace stitchkit {

struct Layout; // layout.hpp

WeightedICFG load_profile(const std::string &path);
WeightedICFG load_profile_stream(std::istream &in, const std::string &name);

/// Canonical serialization: header, blocks ascending by id, edges ascending
/// by (src,dst,kind). load_profile(save_profile(g)) == g.
void save_profile(const WeightedICFG &g, const std::string &path);
void save_profile_stream(const WeightedICFG &g, std::ostream &out);

BlockMap load_block_map(const std::string &path);
BlockMap load_block_map_stream(std::istream &in, const std::string &name);

std::vector<LbrSample> load_lbr_trace(const std::string &path);
std::vector<LbrSample> load_lbr_trace_stream(std::istream &in,
                                             const std::string &name);

std::vector<BlockId> load_block_trace(const std::string &path);

void save_layout(const Layout &layout, const std::string &path);
void save_layout_stream(const Layout &layout, std::ostream &out);
Layout load_layout(const std::string &path);
Layout load_layout_stream(std::istream &in, const std::string &name);

} // namespace stitchkit
