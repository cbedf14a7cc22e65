#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oops/machine.hpp"

namespace oops {

// One computational problem: initial VM state plus a success predicate over
// the run's output. Predicates are pure and cheap (linear in |out_buf|).
struct Task {
  std::string id;
  std::vector<int64_t> stack_init;   // pushed onto the data stack, bottom first
  std::vector<int64_t> inputs;       // readable via `in`, cyclically
  std::array<int64_t, kTapeSize> tape_init{};
  size_t out_cap = 1u << 20;
  std::function<bool(const MachineState&)> success;

  MachineState initial_state(const WeightTable& weights) const;
};

// --- 1^k 2^k -------------------------------------------------------------

Task make_1k2k(int64_t k);
bool verify_1k2k(const std::vector<int64_t>& out, int64_t k);

// --- Towers of Hanoi -----------------------------------------------------

using Move = std::pair<int, int>;  // (source peg, target peg), pegs in 0..2

// True iff the move sequence legally transfers all k disks from peg 0 to
// peg 2. Illegal moves make the verification false, never an exception.
bool verify_hanoi(const std::vector<Move>& moves, int64_t k);

// Classical recursive solution, length exactly 2^k - 1. Test oracle and
// negative-control generator; independent of the VM.
std::vector<Move> hanoi_oracle(int64_t k);

// Decodes out_buf as (from, to) pairs. Malformed output (odd length, pegs
// outside 0..2) simply fails verification.
bool verify_hanoi_output(const std::vector<int64_t>& out, int64_t k);

Task make_hanoi(int64_t k);

// --- Planted fixtures ----------------------------------------------------

struct PlantedTask {
  Task task;
  std::vector<uint8_t> program;  // the planted solver
  uint64_t t_steps;              // its runtime on the task
  BigInt prob_num, prob_den;     // its exact probability under `table`
};

// Builds a task whose predicate accepts exactly the planted program's
// output. The program must terminate (halt or run off its end) on the VM.
PlantedTask planted_task(const std::vector<uint8_t>& program,
                         const WeightTable& table);

}  // namespace oops
