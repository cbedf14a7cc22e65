#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oops/machine.hpp"
#include "oops/task.hpp"
#include "oops/weights.hpp"

namespace oops {

// Source of unbiased coin flips; RNG-backed for sampling, scripted or
// enumerating for tests.
struct CoinSource {
  virtual ~CoinSource() = default;
  virtual bool flip() = 0;            // true = heads
  virtual bool drained() { return false; }  // enumeration oracles run dry
};

class RngCoins : public CoinSource {
 public:
  explicit RngCoins(uint64_t seed);
  bool flip() override;

 private:
  uint64_t s_;
};

enum class GuessEnd : uint8_t {
  Exit,      // tails at a budget check
  Halted,    // machine halted or faulted
  StepCap,   // safety cap on executed instructions
  CoinCap,   // the coin source ran out (enumeration oracles only)
};

struct GuessTrace {
  GuessEnd end = GuessEnd::Exit;
  uint64_t flips = 0;          // coins consumed
  std::vector<bool> bits;      // program-tape bits, written once, in order
  std::vector<uint8_t> tokens; // decoded program
  std::vector<int64_t> output; // out_buf at the end of the trace
  uint64_t steps = 0;          // instructions executed
};

// Algorithm GUESS on the token machine: runtime bound t starts at 1, halves
// whenever a fresh program bit is guessed, doubles (coin permitting) whenever
// the executed-instruction count is about to exceed it; tails exits. Tokens
// are decoded from ceil(log2 |alphabet|)-bit groups, reduced mod the
// alphabet size. step_cap == 0 means no cap. Throws nothing; a drained coin
// source ends the trace with CoinCap.
GuessTrace guess_run(CoinSource& coins, const Task& task,
                     const WeightTable& table, uint64_t step_cap);

struct TailReport {
  std::vector<uint64_t> thresholds;  // t = 2^1 .. 2^12
  std::vector<double> fraction;      // empirical P(runtime > t)
  double max_t_times_fraction = 0;
  uint64_t samples = 0;
  std::string to_tsv() const;
};

// Monte-Carlo estimate of the runtime tail over `samples` GUESS traces.
// Deterministic given the seed and independent of `workers`.
TailReport speed_prior_tail(uint64_t samples, uint64_t seed,
                            const WeightTable& table, int workers);

// Serial reference implementation with identical results; kept for testing
// the parallel kernel and for the benchmark target.
TailReport speed_prior_tail_serial(uint64_t samples, uint64_t seed,
                                   const WeightTable& table);

}  // namespace oops
