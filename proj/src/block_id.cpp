// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/block_id.hpp"

#include <array>
#include <charconv>

namespace stitchkit {

namespace {

constexpr std::array<std::string_view, 6> kTerminatorNames = {
    "CondBranch", "UncondJump", "Return",
    "TailCall",   "IndirectJump", "FallthroughOnly"};

constexpr std::array<std::string_view, 6> kEdgeKindNames = {
    "Fallthrough", "CondTaken", "UncondJump", "Call", "TailCall", "Return"};

} // namespace

std::string_view to_string(TerminatorKind k) {
  return kTerminatorNames[static_cast<std::size_t>(k)];
}

std::string_view to_string(EdgeKind k) {
  return kEdgeKindNames[static_cast<std::size_t>(k)];
}

std::optional<TerminatorKind> terminator_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kTerminatorNames.size(); ++i)
    if (kTerminatorNames[i] == s)
      return static_cast<TerminatorKind>(i);
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i)
    if (kEdgeKindNames[i] == s)
      return static_cast<EdgeKind>(i);
  return std::nullopt;
}

std::string format_block_id(const BlockId &id) {
  static const char *digits = "0123456789abcdef";
  std::uint64_t v = id.pack();
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::optional<BlockId> parse_block_id(std::string_view hex16) {
  if (hex16.size() != 16)
    return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] =
      std::from_chars(hex16.data(), hex16.data() + hex16.size(), v, 16);
  if (ec != std::errc() || ptr != hex16.data() + hex16.size())
    return std::nullopt;
  return BlockId::unpack(v);
}

} // namespace stitchkit
