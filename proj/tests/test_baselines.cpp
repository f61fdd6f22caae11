#include <doctest.h>

#include "oracles.hpp"
#include "stitchkit/baselines.hpp"
#include "stitchkit/evaluation.hpp"
#include "test_support.hpp"

using namespace stitchkit;
using namespace stitchkit::test;

TEST_CASE("original layout is per-function original order") {
  WeightedICFG g = fig2_graph();
  Layout layout = original_layout(g);
  std::vector<BlockId> want = {bid(0, 0), bid(1, 0), bid(1, 1),
                               bid(1, 2), bid(2, 0), bid(3, 0)};
  REQUIRE(layout.entries.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k)
    CHECK(layout.entries[k].id == want[k]);
}

TEST_CASE("PH reproduces the optimal function-granularity layout") {
  WeightedICFG g = fig2_graph();
  Layout layout = baseline_ph_functions(g);
  std::vector<BlockId> want = {bid(0, 0), bid(1, 0), bid(1, 1),
                               bid(1, 2), bid(2, 0), bid(3, 0)};
  REQUIRE(layout.entries.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k)
    CHECK(layout.entries[k].id == want[k]);
  CHECK(count_adjacent(layout, g) == 180);
}

TEST_CASE("PH trivial shapes") {
  SUBCASE("single function is the identity") {
    WeightedICFG g;
    for (std::uint16_t k = 0; k < 4; ++k) {
      BasicBlockInfo info;
      info.id = bid(1, k);
      info.byte_size = 16;
      info.exec_count = 1;
      info.terminator =
          k + 1 == 4 ? TerminatorKind::Return : TerminatorKind::FallthroughOnly;
      g.add_block(info);
      if (k > 0)
        g.add_edge(bid(1, std::uint16_t(k - 1)), bid(1, k),
                   EdgeKind::Fallthrough, 5);
    }
    Layout layout = baseline_ph_functions(g);
    for (std::uint16_t k = 0; k < 4; ++k)
      CHECK(layout.entries[k].id == bid(1, k));
  }
  SUBCASE("one call edge puts the caller first") {
    WeightedICFG g;
    for (std::uint32_t f : {1u, 2u}) {
      BasicBlockInfo info;
      info.id = bid(f, 0);
      info.byte_size = 16;
      info.exec_count = 1;
      info.terminator = TerminatorKind::Return;
      g.add_block(info);
    }
    g.add_edge(bid(2, 0), bid(1, 0), EdgeKind::Call, 10);
    Layout layout = baseline_ph_functions(g);
    CHECK(layout.entries[0].id == bid(2, 0));
    CHECK(layout.entries[1].id == bid(1, 0));
  }
}

TEST_CASE("PH.BB keeps whole hot parts per function") {
  WeightedICFG g = fig2_graph();
  Layout layout = baseline_ph_bb(g, 1);
  CHECK(layout.entries.size() == 6);
  CHECK(count_adjacent(layout, g) <= 180);
  // A's hot part stays contiguous
  std::size_t a0 = layout.rank_of(bid(1, 0));
  std::size_t a1 = layout.rank_of(bid(1, 1));
  std::size_t a2 = layout.rank_of(bid(1, 2));
  std::size_t lo = std::min({a0, a1, a2});
  std::size_t hi = std::max({a0, a1, a2});
  CHECK(hi - lo == 2);
}

TEST_CASE("PH.BB with an all-cold profile keeps the original order") {
  WeightedICFG g = fig2_graph();
  for (const auto &[id, info] : g.blocks())
    g.block_mut(id).exec_count = 0;
  Layout layout = baseline_ph_bb(g, 1);
  Layout orig = original_layout(g);
  REQUIRE(layout.entries.size() == orig.entries.size());
  for (std::size_t k = 0; k < orig.entries.size(); ++k)
    CHECK(layout.entries[k].id == orig.entries[k].id);
}

TEST_CASE("PH.BB on single-block functions reduces to PH") {
  WeightedICFG g;
  auto add = [&](std::uint32_t f, std::uint64_t exec) {
    BasicBlockInfo info;
    info.id = bid(f, 0);
    info.byte_size = 16;
    info.exec_count = exec;
    info.terminator = TerminatorKind::Return;
    g.add_block(info);
  };
  add(1, 10);
  add(2, 10);
  add(3, 10);
  g.add_edge(bid(1, 0), bid(2, 0), EdgeKind::Call, 9);
  g.add_edge(bid(2, 0), bid(3, 0), EdgeKind::Call, 4);
  Layout bb = baseline_ph_bb(g, 1);
  Layout fn = baseline_ph_functions(g);
  REQUIRE(bb.entries.size() == fn.entries.size());
  for (std::size_t k = 0; k < bb.entries.size(); ++k)
    CHECK(bb.entries[k].id == fn.entries[k].id);
}

TEST_CASE("C3 clusters chase their most frequent caller") {
  SUBCASE("call chain collapses into one cluster") {
    WeightedICFG g;
    auto add = [&](std::uint32_t f) {
      BasicBlockInfo info;
      info.id = bid(f, 0);
      info.byte_size = 64;
      info.exec_count = 10;
      info.terminator = TerminatorKind::Return;
      g.add_block(info);
    };
    add(1); // main
    add(2); // f
    add(3); // g
    g.add_edge(bid(1, 0), bid(2, 0), EdgeKind::Call, 10);
    g.add_edge(bid(2, 0), bid(3, 0), EdgeKind::Call, 10);
    Layout layout = baseline_c3(g);
    CHECK(layout.entries[0].id == bid(1, 0));
    CHECK(layout.entries[1].id == bid(2, 0));
    CHECK(layout.entries[2].id == bid(3, 0));
  }
  SUBCASE("size cap starts a new cluster") {
    WeightedICFG g;
    auto add = [&](std::uint32_t f, std::uint64_t size) {
      BasicBlockInfo info;
      info.id = bid(f, 0);
      info.byte_size = size;
      info.exec_count = 10;
      info.terminator = TerminatorKind::Return;
      g.add_block(info);
    };
    add(1, 3000);
    add(2, 2000);
    g.add_edge(bid(1, 0), bid(2, 0), EdgeKind::Call, 10);
    Layout merged = baseline_c3(g, 6000);
    CHECK(merged.rank_of(bid(1, 0)) == 0);
    CHECK(merged.rank_of(bid(2, 0)) == 1);
    // under the cap the callee keeps its own cluster; the callee cluster is
    // denser than the caller's and leads
    Layout split = baseline_c3(g, 4096);
    CHECK(split.rank_of(bid(2, 0)) == 0);
    CHECK(split.rank_of(bid(1, 0)) == 1);
  }
  SUBCASE("no call edges falls back to density order") {
    WeightedICFG g;
    auto add = [&](std::uint32_t f, std::uint64_t exec) {
      BasicBlockInfo info;
      info.id = bid(f, 0);
      info.byte_size = 16;
      info.exec_count = exec;
      info.terminator = TerminatorKind::Return;
      g.add_block(info);
    };
    add(1, 5);
    add(2, 50);
    add(3, 20);
    Layout layout = baseline_c3(g);
    CHECK(layout.entries[0].id == bid(2, 0));
    CHECK(layout.entries[1].id == bid(3, 0));
    CHECK(layout.entries[2].id == bid(1, 0));
  }
}

TEST_CASE("C3 on the worked fixture groups caller before callee") {
  WeightedICFG g = fig2_graph();
  Layout layout = baseline_c3(g);
  CHECK(layout.rank_of(bid(0, 0)) < layout.rank_of(bid(1, 0)));
  CHECK(count_adjacent(layout, g) == 180);
}

TEST_CASE("baselines cover every block exactly once on random graphs") {
  TestRng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    WeightedICFG g = random_icfg(rng);
    for (Layout layout : {original_layout(g), baseline_ph_functions(g),
                          baseline_ph_bb(g, 1), baseline_c3(g)}) {
      CHECK(layout.entries.size() == g.num_blocks());
      std::set<BlockId> seen;
      std::uint64_t offset = 0;
      for (const auto &e : layout.entries) {
        CHECK(seen.insert(e.id).second);
        CHECK(e.offset == offset);
        offset += e.size;
      }
    }
  }
}
