// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Block identity and the typed control-transfer records that make up the
// weighted inter-procedural control flow graph.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stitchkit {

/// Identifies one basic block across the whole program. Packs losslessly
/// into 64 bits: the module tag occupies the top two bytes, the function
/// id the next four, and the block index the low two. block_index 0 is
/// the function entry block.
struct BlockId {
  std::uint16_t module_tag = 0;
  std::uint32_t function_id = 0;
  std::uint16_t block_index = 0;

  constexpr std::uint64_t pack() const {
    return (std::uint64_t(module_tag) << 48) |
           (std::uint64_t(function_id) << 16) | std::uint64_t(block_index);
  }

  static constexpr BlockId unpack(std::uint64_t v) {
    return BlockId{std::uint16_t(v >> 48), std::uint32_t((v >> 16) & 0xffffffffu),
                   std::uint16_t(v & 0xffffu)};
  }

  constexpr bool is_function_entry() const { return block_index == 0; }

  friend constexpr auto operator<=>(const BlockId &a, const BlockId &b) {
    return a.pack() <=> b.pack();
  }
  friend constexpr bool operator==(const BlockId &a, const BlockId &b) {
    return a.pack() == b.pack();
  }
};

/// Module tag + function id, identifying the enclosing function of a block.
struct FunctionKey {
  std::uint16_t module_tag = 0;
  std::uint32_t function_id = 0;

  constexpr std::uint64_t pack() const {
    return (std::uint64_t(module_tag) << 32) | std::uint64_t(function_id);
  }
  static constexpr FunctionKey of(const BlockId &b) {
    return FunctionKey{b.module_tag, b.function_id};
  }
  friend constexpr auto operator<=>(const FunctionKey &a, const FunctionKey &b) {
    return a.pack() <=> b.pack();
  }
  friend constexpr bool operator==(const FunctionKey &a, const FunctionKey &b) {
    return a.pack() == b.pack();
  }
};

constexpr bool same_function(const BlockId &a, const BlockId &b) {
  return a.module_tag == b.module_tag && a.function_id == b.function_id;
}

enum class TerminatorKind : std::uint8_t {
  CondBranch,
  UncondJump,
  Return,
  TailCall,
  IndirectJump,
  FallthroughOnly,
};

enum class EdgeKind : std::uint8_t {
  Fallthrough,
  CondTaken,
  UncondJump,
  Call,
  TailCall,
  Return,
};

std::string_view to_string(TerminatorKind k);
std::string_view to_string(EdgeKind k);
std::optional<TerminatorKind> terminator_from_string(std::string_view s);
std::optional<EdgeKind> edge_kind_from_string(std::string_view s);

/// True for kinds that connect blocks of the same function.
constexpr bool is_intra_kind(EdgeKind k) {
  return k == EdgeKind::Fallthrough || k == EdgeKind::CondTaken ||
         k == EdgeKind::UncondJump;
}

/// Static facts about one basic block plus its profiled execution count.
struct BasicBlockInfo {
  BlockId id;
  std::uint64_t byte_size = 1;  // > 0
  std::uint64_t exec_count = 0; // f(i)
  TerminatorKind terminator = TerminatorKind::FallthroughOnly;
  std::optional<std::uint64_t> orig_address;
};

/// One row of the f(src,dst) table. Stored edges always have count > 0;
/// an absent edge means f = 0.
struct TransferEdge {
  BlockId src;
  BlockId dst;
  EdgeKind kind = EdgeKind::Fallthrough;
  std::uint64_t count = 0;
};

/// Formats a packed id as 16 lowercase hex digits (the wire encoding).
std::string format_block_id(const BlockId &id);
std::optional<BlockId> parse_block_id(std::string_view hex16);

} // namespace stitchkit
