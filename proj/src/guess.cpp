#include "oops/guess.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oops {

namespace {

uint64_t splitmix(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int bits_per_token(size_t alphabet_size) {
  int b = 0;
  while ((size_t{1} << b) < alphabet_size) b++;
  return b == 0 ? 1 : b;
}

// Does executing one more instruction exceed t = 2^e?
bool exceeds(uint64_t steps, int64_t e) {
  if (e < 0) return true;
  if (e >= 63) return false;
  return steps + 1 > (uint64_t{1} << e);
}

Task free_task() {
  Task t;
  t.id = "free";
  t.success = [](const MachineState&) { return false; };
  return t;
}

}  // namespace

RngCoins::RngCoins(uint64_t seed) : s_(seed) {}
bool RngCoins::flip() { return (splitmix(s_) >> 63) != 0; }

GuessTrace guess_run(CoinSource& coins, const Task& task,
                     const WeightTable& table, uint64_t step_cap) {
  GuessTrace tr;
  MachineState st = task.initial_state(table);
  const auto& alpha = table.alphabet();
  const int bpt = bits_per_token(alpha.size());
  int64_t e = 0;  // t = 2^e

  while (true) {
    if (st.seg < 0 && st.ip >= tr.tokens.size()) {
      // The machine wants the next token: guess its bits, halving t per bit.
      uint32_t group = 0;
      for (int i = 0; i < bpt; ++i) {
        if (coins.drained()) {
          tr.end = GuessEnd::CoinCap;
          tr.output = st.out_buf;
          tr.steps = st.steps_used;
          return tr;
        }
        bool heads = coins.flip();
        tr.flips++;
        tr.bits.push_back(heads);
        group = (group << 1) | (heads ? 1u : 0u);
        e--;
      }
      tr.tokens.push_back(alpha[group % alpha.size()]);
      continue;
    }

    // Budget check before every instruction.
    while (exceeds(st.steps_used, e)) {
      if (coins.drained()) {
        tr.end = GuessEnd::CoinCap;
        tr.output = st.out_buf;
        tr.steps = st.steps_used;
        return tr;
      }
      bool heads = coins.flip();
      tr.flips++;
      if (!heads) {
        tr.end = GuessEnd::Exit;
        tr.output = st.out_buf;
        tr.steps = st.steps_used;
        return tr;
      }
      e++;
    }

    Outcome o = step(st, tr.tokens, nullptr);
    if (o == Outcome::Halted || o == Outcome::Error) {
      tr.end = GuessEnd::Halted;
      break;
    }
    if (step_cap != 0 && st.steps_used >= step_cap) {
      tr.end = GuessEnd::StepCap;
      break;
    }
  }
  tr.output = st.out_buf;
  tr.steps = st.steps_used;
  return tr;
}

std::string TailReport::to_tsv() const {
  std::ostringstream os;
  os << "t\tfraction\tt_times_fraction\n";
  for (size_t i = 0; i < thresholds.size(); ++i) {
    os << thresholds[i] << '\t' << fraction[i] << '\t'
       << thresholds[i] * fraction[i] << '\n';
  }
  return os.str();
}

namespace {

constexpr int kTailLevels = 12;           // t = 2^1 .. 2^12
constexpr uint64_t kTraceCap = 1u << 13;  // beyond every measured threshold

TailReport assemble(const std::array<uint64_t, kTailLevels>& over,
                    uint64_t samples) {
  TailReport r;
  r.samples = samples;
  for (int i = 0; i < kTailLevels; ++i) {
    uint64_t t = uint64_t{1} << (i + 1);
    double frac = static_cast<double>(over[i]) / static_cast<double>(samples);
    r.thresholds.push_back(t);
    r.fraction.push_back(frac);
    r.max_t_times_fraction = std::max(r.max_t_times_fraction, t * frac);
  }
  return r;
}

void one_sample(uint64_t seed, uint64_t index, const Task& task,
                const WeightTable& table,
                std::array<uint64_t, kTailLevels>& over) {
  uint64_t mix = seed;
  splitmix(mix);
  mix ^= index * 0x2545f4914f6cdd1dull;
  RngCoins coins(mix);
  GuessTrace tr = guess_run(coins, task, table, kTraceCap);
  for (int i = 0; i < kTailLevels; ++i)
    if (tr.steps > (uint64_t{1} << (i + 1))) over[i]++;
}

}  // namespace

TailReport speed_prior_tail_serial(uint64_t samples, uint64_t seed,
                                   const WeightTable& table) {
  Task task = free_task();
  std::array<uint64_t, kTailLevels> over{};
  for (uint64_t i = 0; i < samples; ++i) one_sample(seed, i, task, table, over);
  return assemble(over, samples);
}

TailReport speed_prior_tail(uint64_t samples, uint64_t seed,
                            const WeightTable& table, int workers) {
  Task task = free_task();
  std::array<uint64_t, kTailLevels> over{};
#ifdef _OPENMP
  if (workers > 1) {
    std::vector<std::array<uint64_t, kTailLevels>> partial(
        static_cast<size_t>(workers));
    for (auto& p : partial) p.fill(0);
#pragma omp parallel for schedule(static) num_threads(workers)
    for (int64_t i = 0; i < static_cast<int64_t>(samples); ++i) {
      int w = omp_get_thread_num();
      one_sample(seed, static_cast<uint64_t>(i), task, table,
                 partial[static_cast<size_t>(w)]);
    }
    for (const auto& p : partial)
      for (int i = 0; i < kTailLevels; ++i) over[i] += p[i];
    return assemble(over, samples);
  }
#else
  (void)workers;
#endif
  for (uint64_t i = 0; i < samples; ++i) one_sample(seed, i, task, table, over);
  return assemble(over, samples);
}

}  // namespace oops
