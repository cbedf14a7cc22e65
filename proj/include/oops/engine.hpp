#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oops/frozen.hpp"
#include "oops/machine.hpp"
#include "oops/task.hpp"
#include "oops/weights.hpp"

namespace oops {

// Test/audit hooks. Production runs pass nullptr.
struct SearchObserver {
  virtual ~SearchObserver() = default;
  // One instruction executed by the currently tested prefix. num/den is the
  // prefix probability, t_sum the runtime spent on it so far (all current
  // tasks), clock the scheduler's total search time.
  virtual void exec_step(const BigInt& num, const BigInt& den, uint64_t t_sum,
                         uint64_t clock) {}
  // A prefix stopped requesting tokens on some task.
  virtual void terminal(std::span<const uint8_t> prefix, size_t task_index,
                        Outcome outcome, bool solved) {}
};

struct SearchConfig {
  WeightTable weights;
  uint32_t n_factor = 1;
  uint64_t global_step_ceiling = uint64_t{10'000'000'000};
  SearchObserver* observer = nullptr;
};

// One near-bias-optimal searcher: depth-first over growing prefixes with the
// probability-times-time backtracking trigger, restarted from the root once
// the reachable tree is exhausted (budgets grow with the clock, so each
// restart explores deeper). Driven one accounting unit at a time so that two
// instances can be interleaved with equal resources.
class PrefixSearch {
 public:
  enum class Status { Running, Solved, Dead };

  // `base` seeds every prefix (the focused search over continuations of
  // p^n); its probability counts as 1 and only fresh tokens multiply in.
  PrefixSearch(std::vector<const Task*> tasks, const WeightTable& weights,
               uint32_t n_factor, std::vector<uint8_t> base,
               const FrozenStore* store, SearchObserver* observer);
  ~PrefixSearch();

  PrefixSearch(PrefixSearch&&) noexcept;
  PrefixSearch& operator=(PrefixSearch&&) noexcept;

  Status tick();
  Status status() const;
  uint64_t clock() const;

  // Valid once status() == Solved.
  const std::vector<uint8_t>& solution() const;
  const BigInt& solution_prob_num() const;
  const BigInt& solution_prob_den() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolveReport {
  struct Row {
    std::string task_id;
    bool solved = false;
    std::string program;
    std::string prob;  // "num/den"
    uint64_t steps_a = 0;
    uint64_t steps_b = 0;
  };
  std::vector<Row> rows;
  uint64_t total_steps = 0;
  bool ceiling_exhausted = false;
  int exhausted_task = -1;

  std::string to_tsv() const;
};

// The OOPS main loop: per task n+1, two interleaved searches (fresh search
// over tasks 1..n+1, focused search extending p^n on task n+1) with equal
// step quanta; the winner's program is frozen.
SolveReport solve_sequence(const std::vector<Task>& tasks,
                           const SearchConfig& config, FrozenStore& store);

}  // namespace oops
