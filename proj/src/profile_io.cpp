// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/profile_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stitchkit/error.hpp"
#include "stitchkit/layout.hpp"

namespace stitchkit {

namespace {

[[noreturn]] void parse_fail(const std::string &name, std::size_t line,
                             const std::string &reason) {
  throw Error(ErrorKind::ParseError,
              name + ":" + std::to_string(line) + ": " + reason);
}

std::vector<std::string> split_ws(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok)
    out.push_back(tok);
  return out;
}

bool is_comment_or_blank(const std::string &line) {
  for (char c : line) {
    if (c == '#')
      return true;
    if (!isspace(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}

std::uint64_t parse_uint(const std::string &tok, int base,
                         const std::string &name, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_fail(name, line, "bad number '" + tok + "'");
  return v;
}

std::uint64_t parse_hex_fixed(const std::string &tok, std::size_t width,
                              const std::string &name, std::size_t line) {
  if (tok.size() != width)
    parse_fail(name, line,
               "expected " + std::to_string(width) + " hex digits, got '" +
                   tok + "'");
  return parse_uint(tok, 16, name, line);
}

void format_hex(std::string &out, std::uint64_t v, int width) {
  static const char *digits = "0123456789abcdef";
  std::string s(std::size_t(width), '0');
  for (int i = width - 1; i >= 0 && v; --i) {
    s[std::size_t(i)] = digits[v & 0xf];
    v >>= 4;
  }
  out += s;
}

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::IoError, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::IoError, "cannot write " + path);
  return out;
}

} // namespace

WeightedICFG load_profile(const std::string &path) {
  auto in = open_input(path);
  return load_profile_stream(in, path);
}

WeightedICFG load_profile_stream(std::istream &in, const std::string &name) {
  WeightedICFG g;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  struct PendingEdge {
    BlockId src, dst;
    EdgeKind kind;
    std::uint64_t count;
    std::size_t line;
  };
  std::vector<PendingEdge> pending; // edges validate after all blocks

  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line))
      continue;
    if (!header_seen) {
      if (line != "cfgprof v1")
        parse_fail(name, lineno, "expected header 'cfgprof v1'");
      header_seen = true;
      continue;
    }
    auto toks = split_ws(line);
    if (toks[0] == "B") {
      if (toks.size() != 7 && toks.size() != 8)
        parse_fail(name, lineno, "block line needs 6 or 7 fields");
      BasicBlockInfo info;
      info.id.module_tag =
          std::uint16_t(parse_hex_fixed(toks[1], 4, name, lineno));
      info.id.function_id =
          std::uint32_t(parse_hex_fixed(toks[2], 8, name, lineno));
      info.id.block_index =
          std::uint16_t(parse_hex_fixed(toks[3], 4, name, lineno));
      info.byte_size = parse_uint(toks[4], 10, name, lineno);
      info.exec_count = parse_uint(toks[5], 10, name, lineno);
      auto term = terminator_from_string(toks[6]);
      if (!term)
        parse_fail(name, lineno, "unknown terminator '" + toks[6] + "'");
      info.terminator = *term;
      if (toks.size() == 8)
        info.orig_address = parse_uint(toks[7], 16, name, lineno);
      if (info.byte_size == 0)
        parse_fail(name, lineno, "byte_size must be > 0");
      if (!g.add_block(info))
        parse_fail(name, lineno,
                   "duplicate block " + format_block_id(info.id));
    } else if (toks[0] == "E") {
      if (toks.size() != 5)
        parse_fail(name, lineno, "edge line needs 4 fields");
      auto src = parse_block_id(toks[1]);
      auto dst = parse_block_id(toks[2]);
      if (!src || !dst)
        parse_fail(name, lineno, "bad block id");
      auto kind = edge_kind_from_string(toks[3]);
      if (!kind)
        parse_fail(name, lineno, "unknown edge kind '" + toks[3] + "'");
      std::uint64_t count = parse_uint(toks[4], 10, name, lineno);
      pending.push_back({*src, *dst, *kind, count, lineno});
    } else {
      parse_fail(name, lineno, "unknown record '" + toks[0] + "'");
    }
  }
  if (!header_seen)
    parse_fail(name, lineno ? lineno : 1, "missing 'cfgprof v1' header");

  for (const auto &e : pending) {
    try {
      g.add_edge(e.src, e.dst, e.kind, e.count);
    } catch (const Error &err) {
      throw Error(err.kind(), name + ":" + std::to_string(e.line) + ": " +
                                  err.what());
    }
  }
  return g;
}

void save_profile(const WeightedICFG &g, const std::string &path) {
  auto out = open_output(path);
  save_profile_stream(g, out);
}

void save_profile_stream(const WeightedICFG &g, std::ostream &out) {
  std::string buf;
  buf += "cfgprof v1\n";
  for (const auto &[id, info] : g.blocks()) {
    buf += "B ";
    format_hex(buf, id.module_tag, 4);
    buf += ' ';
    format_hex(buf, id.function_id, 8);
    buf += ' ';
    format_hex(buf, id.block_index, 4);
    buf += ' ';
    buf += std::to_string(info.byte_size);
    buf += ' ';
    buf += std::to_string(info.exec_count);
    buf += ' ';
    buf += to_string(info.terminator);
    if (info.orig_address) {
      buf += ' ';
      char tmp[17];
      auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, *info.orig_address, 16);
      buf.append(tmp, ptr);
    }
    buf += '\n';
  }
  for (const auto &[key, count] : g.edges()) {
    buf += "E ";
    buf += format_block_id(key.src);
    buf += ' ';
    buf += format_block_id(key.dst);
    buf += ' ';
    buf += to_string(key.kind);
    buf += ' ';
    buf += std::to_string(count);
    buf += '\n';
  }
  out << buf;
}

BlockMap load_block_map(const std::string &path) {
  auto in = open_input(path);
  return load_block_map_stream(in, path);
}

BlockMap load_block_map_stream(std::istream &in, const std::string &name) {
  BlockMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line))
      continue;
    auto toks = split_ws(line);
    if (toks[0] != "M" || toks.size() != 4)
      parse_fail(name, lineno, "expected 'M <start:hex> <size:dec> <id:hex16>'");
    std::uint64_t start = parse_uint(toks[1], 16, name, lineno);
    std::uint64_t size = parse_uint(toks[2], 10, name, lineno);
    auto id = parse_block_id(toks[3]);
    if (!id)
      parse_fail(name, lineno, "bad block id");
    try {
      map.add(start, size, *id);
    } catch (const Error &err) {
      throw Error(err.kind(),
                  name + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  return map;
}

std::vector<LbrSample> load_lbr_trace(const std::string &path) {
  auto in = open_input(path);
  return load_lbr_trace_stream(in, path);
}

std::vector<LbrSample> load_lbr_trace_stream(std::istream &in,
                                             const std::string &name) {
  std::vector<LbrSample> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line))
      continue;
    LbrSample sample;
    for (const auto &tok : split_ws(line)) {
      auto arrow = tok.find("->");
      if (arrow == std::string::npos)
        parse_fail(name, lineno, "expected 'src->dst', got '" + tok + "'");
      LbrSample::Record rec;
      rec.src = parse_uint(tok.substr(0, arrow), 16, name, lineno);
      rec.dst = parse_uint(tok.substr(arrow + 2), 16, name, lineno);
      sample.records.push_back(rec);
    }
    if (sample.records.empty())
      parse_fail(name, lineno, "empty sample");
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<BlockId> load_block_trace(const std::string &path) {
  auto in = open_input(path);
  std::vector<BlockId> trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line))
      continue;
    auto toks = split_ws(line);
    if (toks.size() != 1)
      parse_fail(path, lineno, "expected one block id per line");
    auto id = parse_block_id(toks[0]);
    if (!id)
      parse_fail(path, lineno, "bad block id");
    trace.push_back(*id);
  }
  return trace;
}

void save_layout(const Layout &layout, const std::string &path) {
  auto out = open_output(path);
  save_layout_stream(layout, out);
}

void save_layout_stream(const Layout &layout, std::ostream &out) {
  std::string buf;
  buf += "cslayout v1\n";
  std::size_t rank = 0;
  for (const auto &e : layout.entries) {
    buf += "L ";
    buf += std::to_string(rank++);
    buf += ' ';
    buf += format_block_id(e.id);
    buf += ' ';
    buf += std::to_string(e.offset);
    buf += ' ';
    buf += std::to_string(e.size);
    buf += '\n';
  }
  out << buf;
}

Layout load_layout(const std::string &path) {
  auto in = open_input(path);
  return load_layout_stream(in, path);
}

Layout load_layout_stream(std::istream &in, const std::string &name) {
  Layout layout;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::size_t expected_rank = 0;
  std::uint64_t expected_offset = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line))
      continue;
    if (!header_seen) {
      if (line != "cslayout v1")
        parse_fail(name, lineno, "expected header 'cslayout v1'");
      header_seen = true;
      continue;
    }
    auto toks = split_ws(line);
    if (toks[0] != "L" || toks.size() != 5)
      parse_fail(name, lineno, "expected 'L <rank> <id> <offset> <size>'");
    std::uint64_t rank = parse_uint(toks[1], 10, name, lineno);
    auto id = parse_block_id(toks[2]);
    if (!id)
      parse_fail(name, lineno, "bad block id");
    std::uint64_t offset = parse_uint(toks[3], 10, name, lineno);
    std::uint64_t size = parse_uint(toks[4], 10, name, lineno);
    if (rank != expected_rank)
      parse_fail(name, lineno, "ranks must be consecutive from 0");
    if (offset != expected_offset)
      parse_fail(name, lineno, "offsets must be gap-free");
    if (layout.contains(*id))
      parse_fail(name, lineno, "duplicate block " + format_block_id(*id));
    layout.push(*id, size);
    ++expected_rank;
    expected_offset += size;
  }
  if (!header_seen)
    parse_fail(name, lineno ? lineno : 1, "missing 'cslayout v1' header");
  return layout;
}

} // namespace stitchkit
