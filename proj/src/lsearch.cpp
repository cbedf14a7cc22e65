#include "oops/lsearch.hpp"

#include <algorithm>

namespace oops {

namespace {

struct Ctx {
  const Task* task;
  uint64_t ceiling;
  uint64_t total = 0;
  LsearchResult res;
};

uint64_t clamp64(const BigInt& v) {
  if (v > UINT64_MAX) return UINT64_MAX;
  if (v < 0) return 0;
  return static_cast<uint64_t>(v);
}

// st is `pfx` run to its end (RequestToken); tries every continuation whose
// phase budget floor(P * T) exceeds the work already replayed by the parent.
// Returns true when the search must stop (found or ceiling).
bool dfs(Ctx& c, const MachineState& st, Prefix& pfx, const BigInt& T) {
  for (uint8_t tok : st.weights.ordered_continuations()) {
    Prefix child = pfx;
    child.extend(tok, st.weights);
    uint64_t budget = clamp64(child.prob_num * T / child.prob_den);
    // Children are in descending-probability order: once a budget cannot
    // even cover the parent's replayed steps, no later sibling (nor any
    // descendant) can either.
    if (budget <= st.steps_used) break;
    uint64_t add = budget - st.steps_used;
    if (c.total + add > c.ceiling) add = c.ceiling - c.total;

    MachineState cs = st;
    Outcome o = run(cs, child.tokens, nullptr, add);
    c.total += cs.steps_used - st.steps_used;
    if (c.total >= c.ceiling && o == Outcome::BudgetExhausted) {
      c.res.ceiling_exhausted = true;
      return true;
    }

    bool ok = (o == Outcome::RequestToken || o == Outcome::Halted) &&
              c.task->success(cs);
    if (ok) {
      c.res.found = true;
      c.res.program = child.tokens;
      c.res.t_program = cs.steps_used;
      return true;
    }
    if (o == Outcome::RequestToken && dfs(c, cs, child, T)) return true;
    // Halted/Error: dead program. BudgetExhausted: retried next phase.
  }
  return false;
}

}  // namespace

LsearchResult lsearch(const Task& task, const WeightTable& table,
                      uint64_t ceiling) {
  Ctx c{&task, ceiling};
  BigInt T = 1;
  while (true) {
    uint64_t before = c.total;
    MachineState root = task.initial_state(table);
    Prefix pfx;
    bool stop = false;
    if (task.success(root)) {  // vacuous task: the empty program solves it
      c.res.found = true;
      stop = true;
    } else {
      stop = dfs(c, root, pfx, T);
    }
    // A phase that could not execute anything will never execute anything
    // (only happens for degenerate empty alphabets).
    if (!stop && c.total == before && T > BigInt(1) << 20) stop = true;
    if (stop || c.total >= ceiling) {
      if (!c.res.found) c.res.ceiling_exhausted = true;
      c.res.total_steps = c.total;
      c.res.final_limit = clamp64(T);
      return c.res;
    }
    T *= 2;
  }
}

WeightTable als_update(const WeightTable& table,
                       const std::vector<uint8_t>& solver, int64_t gamma_num,
                       int64_t gamma_den, int64_t K) {
  WeightTable out = table;
  for (uint8_t tok : solver) {
    BigInt w = out.weight(tok);
    // w + floor(w * gamma * K), capped by set_weight. The increment rounds
    // down so that a vanishing learning rate leaves the table unchanged.
    BigInt grown = w + w * gamma_num * K / gamma_den;
    out.set_weight(tok, static_cast<uint32_t>(
                            std::min<BigInt>(grown, kWeightCap).convert_to<uint32_t>()));
  }
  return out;
}

}  // namespace oops
