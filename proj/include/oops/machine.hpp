#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "oops/frozen.hpp"
#include "oops/weights.hpp"

namespace oops {

inline constexpr size_t kDataStackMax = 128;
inline constexpr size_t kCallStackMax = 128;
inline constexpr size_t kTapeSize = 32;

enum class Outcome : uint8_t {
  Continue,         // one instruction executed, nothing terminal
  RequestToken,     // ip reached the end of the written prefix
  Halted,           // halt executed, or ret with an empty call stack
  Error,            // instruction fault; the candidate is dead
  BudgetExhausted,  // run() hit its step budget
};

// Full mutable state of one VM run on one task. Value semantics throughout;
// a snapshot is a plain copy and restore is assignment.
struct MachineState {
  struct Frame {
    int32_t seg;  // segment to return to: -1 = prefix, else frozen index
    uint32_t ret_ip;
    bool operator==(const Frame&) const = default;
  };
  struct FuncDef {
    int32_t seg;
    uint32_t ip;
    bool np;  // defined via defnp: caller pops k, returns if 0, else pushes k-1
    bool operator==(const FuncDef&) const = default;
  };

  std::vector<int64_t> data_stack;
  std::vector<Frame> call_stack;
  int32_t seg = -1;  // -1: executing the growing prefix, else frozen program
  uint32_t ip = 0;
  std::array<int64_t, kTapeSize> tape{};
  std::vector<int64_t> out_buf;
  size_t out_cap = 1u << 20;
  std::vector<int64_t> inputs;  // read cyclically by `in`
  size_t in_pos = 0;
  WeightTable weights;
  std::vector<FuncDef> functions;
  uint32_t skip_depth = 0;  // >0 while scanning over a def/defnp body
  int32_t skip_func = -1;   // function being defined; invoked at endnp close
  bool skip_np = false;
  uint64_t steps_used = 0;

  bool operator==(const MachineState&) const = default;
};

using Snapshot = MachineState;

inline Snapshot snapshot(const MachineState& s) { return s; }
inline MachineState restore(const Snapshot& snap) { return snap; }

// Executes at most one instruction. Returns RequestToken without mutation
// when ip sits at the end of the written prefix. `store` may be null when
// the program space has no frozen code.
Outcome step(MachineState& state, std::span<const uint8_t> prefix,
             const FrozenStore* store);

// Repeats step() until a terminal outcome or until steps_used has grown by
// step_budget, in which case BudgetExhausted.
Outcome run(MachineState& state, std::span<const uint8_t> prefix,
            const FrozenStore* store, uint64_t step_budget);

}  // namespace oops
