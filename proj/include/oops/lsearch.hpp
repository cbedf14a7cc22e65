#pragma once

#include <cstdint>
#include <vector>

#include "oops/task.hpp"
#include "oops/weights.hpp"

namespace oops {

struct LsearchResult {
  bool found = false;
  bool ceiling_exhausted = false;
  std::vector<uint8_t> program;
  uint64_t t_program = 0;     // runtime of the found program
  uint64_t total_steps = 0;   // instructions executed over all phases
  uint64_t final_limit = 0;   // T of the phase that succeeded (or last tried)
};

// Phase-doubling universal search: in the phase with time limit T, every
// candidate program q receives a total budget of floor(P(q) * T) of its own
// instructions; T doubles until the task's predicate is satisfied or the
// ceiling of executed instructions is reached. Deterministic.
LsearchResult lsearch(const Task& task, const WeightTable& table,
                      uint64_t ceiling);

// Multiplicative reward update: each token occurrence of the solver gets
// w <- w + floor(w * gamma * K); the cap clamps. Untouched tokens lose
// probability mass implicitly through the grown total.
WeightTable als_update(const WeightTable& table,
                       const std::vector<uint8_t>& solver, int64_t gamma_num,
                       int64_t gamma_den, int64_t K = 2);

}  // namespace oops
