// Part of the stitchkit project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include "stitchkit/synthetic.hpp"

#include <algorithm>
#include <random>

namespace stitchkit {

namespace {

// Deterministic across platforms: only raw mt19937_64 draws, no
// std::*_distribution.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [lo, hi], inclusive.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return lo + next() % (hi - lo + 1);
  }

  bool chance_pct(std::uint32_t pct) { return next() % 100 < pct; }

private:
  std::mt19937_64 engine_;
};

enum class Role : std::uint8_t {
  Step,
  CallStep,
  DiamondHead, // two-way branch whose sides call different functions
  Jump,        // rejoin jump at the end of a diamond side
  ColdPad,
  Exit,
};

struct SynthBlock {
  BlockId id;
  std::uint64_t size = 16;
  Role role = Role::Step;
  TerminatorKind term = TerminatorKind::FallthroughOnly;
  int next_hot = -1;    // function-local index of the continuation
  int else_idx = -1;    // taken side of a diamond head
  std::uint32_t callee = 0; // function id, for CallStep / tail-call Exit
  bool tail_call = false;
};

struct SynthFunction {
  std::uint32_t id = 0;
  std::vector<SynthBlock> blocks; // original order
  std::vector<int> hot_indices;   // indices of Step/CallStep/Exit blocks
};

struct Event {
  BlockId src, dst;
  EdgeKind kind;
  bool taken; // taken transfers become LBR records
};

} // namespace

SyntheticProgram generate_synthetic(const SyntheticSpec &spec) {
  Rng rng(spec.seed);
  const std::uint16_t module = 0;

  // Function 0 is a one-block driver that tail-calls function 1, so every
  // walk begins with a taken transfer.
  std::vector<SynthFunction> fns(spec.num_functions + 1);
  fns[0].id = 0;
  {
    SynthBlock driver;
    driver.id = BlockId{module, 0, 0};
    driver.size = 16;
    driver.role = Role::Exit;
    driver.term = TerminatorKind::TailCall;
    driver.tail_call = true;
    driver.callee = 1;
    fns[0].blocks.push_back(driver);
    fns[0].hot_indices.push_back(0);
  }

  for (std::uint32_t f = 1; f <= spec.num_functions; ++f) {
    SynthFunction &fn = fns[f];
    fn.id = f;
    std::uint32_t hot_count =
        std::uint32_t(rng.uniform(spec.min_hot_blocks, spec.max_hot_blocks));
    std::uint16_t index = 0;
    for (std::uint32_t step = 0; step < hot_count; ++step) {
      bool last = step + 1 == hot_count;
      SynthBlock blk;
      blk.id = BlockId{module, f, index++};
      blk.size = rng.uniform(16, 64);
      if (last) {
        blk.role = Role::Exit;
        // Tail calls only target higher function ids, so every tail-call
        // chain terminates and the walk cannot spin without returning.
        blk.tail_call = f < spec.num_functions &&
                        rng.chance_pct(spec.tail_call_pct);
        blk.term = blk.tail_call ? TerminatorKind::TailCall
                                 : TerminatorKind::Return;
        if (blk.tail_call)
          blk.callee = std::uint32_t(rng.uniform(f + 1, spec.num_functions));
        fn.hot_indices.push_back(int(fn.blocks.size()));
        fn.blocks.push_back(blk);
        continue;
      }
      auto pick_callee = [&] {
        std::uint32_t callee =
            std::uint32_t(rng.uniform(1, spec.num_functions));
        if (callee == f)
          callee = 1 + callee % spec.num_functions;
        return callee;
      };
      bool is_diamond = rng.chance_pct(spec.diamond_pct);
      bool is_call = !is_diamond && rng.chance_pct(spec.call_site_pct);
      bool has_pad = !is_diamond && !is_call && rng.chance_pct(spec.cold_pad_pct);
      if (is_diamond) {
        // Both branch sides are hot and call different functions before
        // rejoining: the shape where per-function layouts separate callers
        // from their callees.
        blk.role = Role::DiamondHead;
        blk.term = TerminatorKind::CondBranch;
        fn.hot_indices.push_back(int(fn.blocks.size()));
        fn.blocks.push_back(blk);

        auto side = [&](std::uint32_t callee) {
          SynthBlock call;
          call.id = BlockId{module, f, index++};
          call.size = rng.uniform(16, 64);
          call.role = Role::CallStep;
          call.term = TerminatorKind::FallthroughOnly;
          call.callee = callee;
          call.next_hot = int(fn.blocks.size()) + 1;
          fn.blocks.push_back(call);
          SynthBlock jump;
          jump.id = BlockId{module, f, index++};
          jump.size = rng.uniform(16, 32);
          jump.role = Role::Jump;
          jump.term = TerminatorKind::UncondJump;
          fn.blocks.push_back(jump);
        };
        side(pick_callee());
        int else_call = int(fn.blocks.size());
        side(pick_callee());
        fn.blocks[std::size_t(fn.hot_indices.back())].else_idx = else_call;
        continue;
      }
      if (is_call) {
        blk.role = Role::CallStep;
        blk.term = TerminatorKind::FallthroughOnly;
        blk.callee = pick_callee();
      } else if (has_pad) {
        // Hot step always jumps over an unreachable pad (dead error-handling
        // code in the original order).
        blk.role = Role::Step;
        blk.term = TerminatorKind::CondBranch;
      } else {
        blk.role = Role::Step;
        blk.term = TerminatorKind::FallthroughOnly;
      }
      fn.hot_indices.push_back(int(fn.blocks.size()));
      fn.blocks.push_back(blk);
      if (has_pad) {
        SynthBlock pad;
        pad.id = BlockId{module, f, index++};
        pad.size = rng.uniform(spec.min_pad_bytes, spec.max_pad_bytes);
        pad.role = Role::ColdPad;
        pad.term = TerminatorKind::Return; // never executed
        fn.blocks.push_back(pad);
      }
    }
    // Wire continuation links now that indices are final.
    for (std::size_t h = 0; h + 1 < fn.hot_indices.size(); ++h) {
      SynthBlock &step = fn.blocks[std::size_t(fn.hot_indices[h])];
      int next = fn.hot_indices[h + 1];
      if (step.role == Role::DiamondHead) {
        fn.blocks[std::size_t(fn.hot_indices[h]) + 2].next_hot = next;
        fn.blocks[std::size_t(step.else_idx) + 1].next_hot = next;
        step.next_hot = fn.hot_indices[h] + 1; // fall-through side
      } else {
        step.next_hot = next;
      }
    }
  }

  // Static structure into the graph: blocks plus address map.
  SyntheticProgram out;
  std::uint64_t address = 0x400000;
  for (const SynthFunction &fn : fns)
    for (const SynthBlock &blk : fn.blocks) {
      BasicBlockInfo info;
      info.id = blk.id;
      info.byte_size = blk.size;
      info.exec_count = 0;
      info.terminator = blk.term;
      info.orig_address = address;
      out.graph.add_block(info);
      out.map.add(address, blk.size, blk.id);
      address += blk.size;
    }

  // Interpret. The stack holds return targets (block ids).
  std::vector<Event> events;
  std::vector<BlockId> visits;
  std::vector<BlockId> stack;
  const SynthBlock *cur = &fns[0].blocks[0];
  // block_index equals the position in original order by construction
  auto block_at = [&](const BlockId &id) -> const SynthBlock & {
    return fns[id.function_id].blocks[std::size_t(id.block_index)];
  };
  auto entry_of = [&](std::uint32_t f) -> const SynthBlock & {
    return fns[f].blocks[0];
  };

  for (std::uint64_t step = 0; step < spec.trace_steps; ++step) {
    visits.push_back(cur->id);
    const SynthFunction &fn = fns[cur->id.function_id];
    switch (cur->role) {
    case Role::CallStep: {
      const SynthBlock &next = fn.blocks[std::size_t(cur->next_hot)];
      if (stack.size() < spec.max_call_depth) {
        events.push_back({cur->id, entry_of(cur->callee).id, EdgeKind::Call,
                          true});
        stack.push_back(next.id);
        cur = &entry_of(cur->callee);
      } else {
        // Depth cap: skip the call, keep walking this function.
        events.push_back({cur->id, next.id, EdgeKind::Fallthrough, false});
        cur = &next;
      }
      break;
    }
    case Role::Step: {
      const SynthBlock &next = fn.blocks[std::size_t(cur->next_hot)];
      if (cur->term == TerminatorKind::CondBranch)
        events.push_back({cur->id, next.id, EdgeKind::CondTaken, true});
      else
        events.push_back({cur->id, next.id, EdgeKind::Fallthrough, false});
      cur = &next;
      break;
    }
    case Role::DiamondHead: {
      const SynthBlock &then_call = fn.blocks[std::size_t(cur->next_hot)];
      const SynthBlock &else_call = fn.blocks[std::size_t(cur->else_idx)];
      if (rng.chance_pct(spec.branch_skew_pct)) {
        events.push_back({cur->id, then_call.id, EdgeKind::Fallthrough, false});
        cur = &then_call;
      } else {
        events.push_back({cur->id, else_call.id, EdgeKind::CondTaken, true});
        cur = &else_call;
      }
      break;
    }
    case Role::Jump: {
      const SynthBlock &next = fn.blocks[std::size_t(cur->next_hot)];
      events.push_back({cur->id, next.id, EdgeKind::UncondJump, true});
      cur = &next;
      break;
    }
    case Role::ColdPad: // unreachable
      cur = &fns[0].blocks[0];
      break;
    case Role::Exit: {
      if (cur->tail_call) {
        events.push_back({cur->id, entry_of(cur->callee).id,
                          EdgeKind::TailCall, true});
        cur = &entry_of(cur->callee);
      } else if (!stack.empty()) {
        BlockId target = stack.back();
        stack.pop_back();
        events.push_back({cur->id, target, EdgeKind::Return, true});
        cur = &block_at(target);
      } else {
        // Walk drained the stack: hand control back to the driver.
        events.push_back({cur->id, fns[0].blocks[0].id, EdgeKind::Return,
                          true});
        cur = &fns[0].blocks[0];
      }
      break;
    }
    }
  }

  // Drop trailing fall-through events so the record stream ends on a taken
  // transfer and every fall-through is inferable from the LBR window. Every
  // visit emits exactly one event, so the arrays stay aligned.
  while (!events.empty() && !events.back().taken) {
    events.pop_back();
    visits.pop_back();
  }

  for (const Event &e : events)
    out.graph.add_edge(e.src, e.dst, e.kind, 1);
  for (const BlockId &b : visits)
    out.graph.block_mut(b).exec_count += 1;
  out.trace = std::move(visits);

  LbrSample sample;
  auto flush = [&] {
    if (!sample.records.empty()) {
      out.lbr.push_back(std::move(sample));
      sample = LbrSample{};
    }
  };
  for (const Event &e : events) {
    if (!e.taken)
      continue;
    const auto &src = out.graph.block(e.src);
    const auto &dst = out.graph.block(e.dst);
    sample.records.push_back(
        {*src.orig_address + src.byte_size - 1, *dst.orig_address});
    if (spec.lbr_sample_len != 0 &&
        sample.records.size() >= spec.lbr_sample_len)
      flush();
  }
  flush();
  return out;
}

} // namespace stitchkit
