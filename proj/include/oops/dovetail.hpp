#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oops/task.hpp"
#include "oops/weights.hpp"

namespace oops {

struct DovetailEvent {
  uint64_t phase;
  std::vector<uint8_t> program;
  std::vector<int64_t> new_output;  // symbols produced since the last event
};

struct DovetailCompletion {
  std::vector<uint8_t> program;
  uint64_t l_bits;        // program length in bits (tokens * bits-per-token)
  uint64_t steps;         // its total executed instructions s
  uint64_t global_time;   // executed instructions across all programs so far
  bool halted;            // halt vs. fault
};

struct DovetailResult {
  std::vector<DovetailEvent> events;
  std::vector<DovetailCompletion> completions;
  uint64_t phases = 0;
  uint64_t global_time = 0;
  std::vector<uint64_t> phase_allocation;  // steps granted per phase
};

// Fair interleaving of every program: in phase i each known program of bit
// length l receives 2^(i-l) instruction steps; a program that requests
// another token splits its remaining grant evenly over its one-token
// extensions. Requires a power-of-two alphabet size so that bit lengths are
// exact. Runs until executed instructions reach global_steps.
DovetailResult dovetail(const Task& task, const WeightTable& table,
                        uint64_t global_steps);

}  // namespace oops
