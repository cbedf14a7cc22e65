#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oops/dovetail.hpp"
#include "oops/guess.hpp"
#include "oops/isa.hpp"
#include "oops/lsearch.hpp"
#include "oops/task.hpp"

using namespace oops;

namespace {

WeightTable table4() { return WeightTable({OP_C0, OP_C1, OP_OUTV, OP_HALT}); }

uint64_t lsearch_bound(const PlantedTask& p) {
  BigInt b = BigInt(4) * p.t_steps * p.prob_den / p.prob_num;
  return b.convert_to<uint64_t>();
}

Task free_output() {
  Task t;
  t.id = "free";
  t.success = [](const MachineState&) { return false; };
  return t;
}

// Replays a fixed bit string; drained() once exhausted (enumeration oracle).
struct ScriptedCoins : CoinSource {
  std::vector<bool> bits;
  size_t pos = 0;
  bool flip() override { return bits[pos++]; }
  bool drained() override { return pos >= bits.size(); }
};

}  // namespace

TEST_CASE("lsearch finds planted solvers within 4 t / P") {
  auto table = table4();
  std::vector<std::vector<uint8_t>> planted = {
      {OP_C1, OP_OUTV},
      {OP_C1, OP_OUTV, OP_HALT},
      {OP_C0, OP_OUTV, OP_HALT},
      {OP_C1, OP_C1, OP_OUTV, OP_OUTV},
      {OP_C0, OP_C1, OP_OUTV, OP_OUTV, OP_HALT},
  };
  for (const auto& prog : planted) {
    PlantedTask p = planted_task(prog, table);
    LsearchResult r = lsearch(p.task, table, 1u << 26);
    CHECK(r.found);
    CHECK(r.total_steps <= lsearch_bound(p));
    // The winner really solves the task.
    MachineState s = p.task.initial_state(table);
    run(s, r.program, nullptr, 100000);
    CHECK(p.task.success(s));
  }
}

TEST_CASE("lsearch respects a non-uniform prior") {
  auto table = table4();
  table.set_weight(OP_HALT, 8);
  PlantedTask p = planted_task({OP_C1, OP_OUTV, OP_HALT}, table);
  LsearchResult r = lsearch(p.task, table, 1u << 26);
  CHECK(r.found);
  CHECK(r.total_steps <= lsearch_bound(p));
}

TEST_CASE("lsearch determinism and ceiling accounting") {
  auto table = table4();
  Task hard = free_output();  // unsatisfiable: success is always false
  LsearchResult a = lsearch(hard, table, 100000);
  LsearchResult b = lsearch(hard, table, 100000);
  CHECK(a.ceiling_exhausted);
  CHECK_FALSE(a.found);
  CHECK(a.total_steps == 100000);
  CHECK(a.total_steps == b.total_steps);
  CHECK(a.final_limit == b.final_limit);
}

TEST_CASE("als_update worked examples") {
  auto table = table4();
  // Solver uses the third alphabet token once; gamma=1/2, K=2 doubles it.
  WeightTable up = als_update(table, {OP_OUTV}, 1, 2, 2);
  CHECK(up.weight(OP_OUTV) == 2);
  CHECK(up.weight(OP_C0) == 1);
  CHECK(up.total() == 5);  // P(outv) = 2/5 > 1/4

  // Vanishing learning rate: the increment rounds down to zero.
  WeightTable same = als_update(table, {OP_OUTV}, 1, 1000, 2);
  CHECK(same == table);

  // Two successive updates never decrease solver-token weights.
  WeightTable twice = als_update(up, {OP_OUTV}, 1, 2, 2);
  CHECK(twice.weight(OP_OUTV) >= up.weight(OP_OUTV));

  // Repeated occurrences compound per occurrence.
  WeightTable rep = als_update(table, {OP_OUTV, OP_OUTV}, 1, 2, 2);
  CHECK(rep.weight(OP_OUTV) == 4);
}

TEST_CASE("als speeds up a rerun on the same problem") {
  auto table = table4();
  PlantedTask p = planted_task({OP_C1, OP_C1, OP_OUTV, OP_OUTV}, table);
  LsearchResult first = lsearch(p.task, table, 1u << 26);
  REQUIRE(first.found);
  WeightTable up = als_update(table, first.program, 1, 2, 2);
  LsearchResult second = lsearch(p.task, up, 1u << 26);
  REQUIRE(second.found);
  CHECK(second.total_steps <= first.total_steps);
  CHECK(second.program == first.program);
}

TEST_CASE("guess is deterministic given the seed") {
  auto table = table4();
  Task t = free_output();
  RngCoins a(42), b(42);
  GuessTrace ta = guess_run(a, t, table, 1 << 13);
  GuessTrace tb = guess_run(b, t, table, 1 << 13);
  CHECK(ta.end == tb.end);
  CHECK(ta.flips == tb.flips);
  CHECK(ta.bits == tb.bits);
  CHECK(ta.tokens == tb.tokens);
  CHECK(ta.output == tb.output);
  CHECK(ta.steps == tb.steps);
}

TEST_CASE("guess decodes tokens from its immutable bit tape") {
  auto table = table4();
  Task t = free_output();
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    RngCoins coins(seed);
    GuessTrace tr = guess_run(coins, t, table, 1 << 13);
    // Bits are written once, two per token, and decode to exactly the
    // executed program.
    REQUIRE(tr.bits.size() == tr.tokens.size() * 2);
    for (size_t i = 0; i < tr.tokens.size(); ++i) {
      uint32_t group = (tr.bits[2 * i] ? 2u : 0u) | (tr.bits[2 * i + 1] ? 1u : 0u);
      CHECK(tr.tokens[i] == table.alphabet()[group % 4]);
    }
  }
}

TEST_CASE("coin source head rate within 3 sigma of one half") {
  RngCoins coins(7);
  const int n = 100000;
  int heads = 0;
  for (int i = 0; i < n; ++i) heads += coins.flip() ? 1 : 0;
  double rate = static_cast<double>(heads) / n;
  double sigma = std::sqrt(0.25 / n);
  CHECK(std::abs(rate - 0.5) <= 3 * sigma);
}

TEST_CASE("monte-carlo S(\"11\") matches the coin-enumeration oracle") {
  auto table = WeightTable({OP_C0, OP_C1, OP_OUT1, OP_HALT});
  Task t = free_output();
  auto starts_11 = [](const std::vector<int64_t>& out) {
    return out.size() >= 2 && out[0] == 1 && out[1] == 1;
  };

  // Exact bracket: enumerate every coin string of depth 20; a trace that
  // ends after f flips accounts for 2^(20-f) of the strings automatically.
  const int depth = 20;
  uint64_t yes = 0, undecided = 0;
  for (uint64_t code = 0; code < (uint64_t{1} << depth); ++code) {
    ScriptedCoins coins;
    for (int i = depth - 1; i >= 0; --i) coins.bits.push_back((code >> i) & 1);
    GuessTrace tr = guess_run(coins, t, table, 0);
    uint64_t weight_exp = depth - tr.flips;  // 2^weight_exp strings share it
    code += (uint64_t{1} << weight_exp) - 1;
    if (starts_11(tr.output))
      yes += uint64_t{1} << weight_exp;
    else if (tr.end == GuessEnd::CoinCap && tr.output.size() < 2 &&
             (tr.output.empty() || tr.output[0] == 1))
      undecided += uint64_t{1} << weight_exp;
  }
  double lower = static_cast<double>(yes) / std::pow(2.0, depth);
  double upper = lower + static_cast<double>(undecided) / std::pow(2.0, depth);

  const uint64_t samples = 100000;
  uint64_t hits = 0;
  for (uint64_t i = 0; i < samples; ++i) {
    RngCoins coins(i * 2654435761u + 17);
    GuessTrace tr = guess_run(coins, t, table, 1 << 13);
    if (starts_11(tr.output)) hits++;
  }
  double est = static_cast<double>(hits) / static_cast<double>(samples);
  double sigma = std::sqrt(0.25 / static_cast<double>(samples));
  CHECK(est >= lower - 4 * sigma);
  CHECK(est <= upper + 4 * sigma);
  CHECK(lower > 0);  // "11" is reachable, the bracket is informative
}

TEST_CASE("speed-prior tail: monotone, worker-independent, stable") {
  auto table = WeightTable::full_uniform();
  TailReport serial = speed_prior_tail_serial(20000, 3, table);
  REQUIRE(serial.thresholds.size() == 12);
  for (size_t i = 1; i < serial.fraction.size(); ++i)
    CHECK(serial.fraction[i] <= serial.fraction[i - 1]);
  for (int workers : {1, 2, 4}) {
    TailReport par = speed_prior_tail(20000, 3, table, workers);
    CHECK(par.fraction == serial.fraction);
    CHECK(par.max_t_times_fraction == serial.max_t_times_fraction);
  }
}

TEST_CASE("dovetailer phase accounting and first-completion bound") {
  auto table = table4();
  Task t = free_output();
  t.out_cap = 1u << 10;
  DovetailResult r = dovetail(t, table, 1 << 14);
  REQUIRE(!r.completions.empty());
  REQUIRE(!r.events.empty());

  // Live programs form a prefix-free set, so each phase grants at most 2^i
  // steps; 2^{i+1} is the documented ceiling.
  for (size_t i = 0; i < r.phase_allocation.size(); ++i)
    CHECK(r.phase_allocation[i] <= uint64_t{1} << (i + 2));

  uint64_t granted = 0;
  for (uint64_t g : r.phase_allocation) granted += g;
  CHECK(granted >= r.global_time);  // no step is shared or double-counted

  // First completion of a program of bit length l after s of its own steps
  // happens within 2^{l+1} * (s+1) global steps.
  for (const auto& c : r.completions) {
    REQUIRE(c.l_bits < 40);
    BigInt bound = (BigInt(1) << (c.l_bits + 1)) * (c.steps + 1);
    CHECK(BigInt(c.global_time) <= bound);
  }

  // Events arrive in phase order.
  for (size_t i = 1; i < r.events.size(); ++i)
    CHECK(r.events[i].phase >= r.events[i - 1].phase);
}

TEST_CASE("dovetailer determinism") {
  auto table = table4();
  Task t = free_output();
  DovetailResult a = dovetail(t, table, 1 << 12);
  DovetailResult b = dovetail(t, table, 1 << 12);
  CHECK(a.global_time == b.global_time);
  CHECK(a.phases == b.phases);
  CHECK(a.completions.size() == b.completions.size());
  CHECK(a.phase_allocation == b.phase_allocation);
}
