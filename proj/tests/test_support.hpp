// Shared fixtures and deterministic random helpers for the test suites.
#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "stitchkit/icfg.hpp"

namespace stitchkit::test {

inline std::string data_path(const std::string &file) {
  const char *dir = std::getenv("STITCHKIT_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + file;
}

inline BlockId bid(std::uint32_t function, std::uint16_t index,
                   std::uint16_t module = 0) {
  return BlockId{module, function, index};
}

// The six-block, five-edge worked example: M calls A 100x, A0 branches to
// A1 (80) and A2 (20), A1 calls B, A2 calls C. All blocks 16 bytes.
inline WeightedICFG fig2_graph() {
  WeightedICFG g;
  auto add = [&](BlockId id, std::uint64_t exec, TerminatorKind term) {
    BasicBlockInfo info;
    info.id = id;
    info.byte_size = 16;
    info.exec_count = exec;
    info.terminator = term;
    g.add_block(info);
  };
  add(bid(0, 0), 100, TerminatorKind::Return);     // M
  add(bid(1, 0), 100, TerminatorKind::CondBranch); // A0
  add(bid(1, 1), 80, TerminatorKind::Return);      // A1
  add(bid(1, 2), 20, TerminatorKind::Return);      // A2
  add(bid(2, 0), 80, TerminatorKind::Return);      // B
  add(bid(3, 0), 20, TerminatorKind::Return);      // C
  g.add_edge(bid(0, 0), bid(1, 0), EdgeKind::Call, 100);
  g.add_edge(bid(1, 0), bid(1, 1), EdgeKind::CondTaken, 80);
  g.add_edge(bid(1, 0), bid(1, 2), EdgeKind::Fallthrough, 20);
  g.add_edge(bid(1, 1), bid(2, 0), EdgeKind::Call, 80);
  g.add_edge(bid(1, 2), bid(3, 0), EdgeKind::Call, 20);
  return g;
}

// Raw-draw helpers: identical sequences on every platform.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return lo + next() % (hi - lo + 1);
  }
  bool chance_pct(std::uint32_t pct) { return next() % 100 < pct; }

private:
  std::mt19937_64 engine_;
};

} // namespace stitchkit::test
