#include "oops/dovetail.hpp"

#include <algorithm>
#include <memory>
#include <utility>

namespace oops {

namespace {

int bits_per_token(size_t alphabet_size) {
  int b = 0;
  while ((size_t{1} << b) < alphabet_size) b++;
  return b == 0 ? 1 : b;
}

struct Node {
  std::vector<uint8_t> toks;
  MachineState st;
  uint64_t l_bits = 0;
  size_t reported = 0;  // out_buf symbols already emitted as events
};

struct Sched {
  const WeightTable* table;
  uint64_t limit;
  int bpt;
  DovetailResult res;
  bool stopped = false;

  void emit(uint64_t phase, Node& n) {
    if (n.st.out_buf.size() > n.reported) {
      DovetailEvent ev;
      ev.phase = phase;
      ev.program = n.toks;
      ev.new_output.assign(n.st.out_buf.begin() +
                               static_cast<ptrdiff_t>(n.reported),
                           n.st.out_buf.end());
      n.reported = n.st.out_buf.size();
      res.events.push_back(std::move(ev));
    }
  }

  // Spends up to `grant` instruction steps on the node (and, after forks, on
  // its fresh extensions). Surviving nodes are pushed onto `next`.
  void process(std::unique_ptr<Node> n, uint64_t grant, uint64_t phase,
               std::vector<std::unique_ptr<Node>>& next) {
    const auto& alpha = table->alphabet();
    while (!stopped) {
      if (n->st.seg < 0 && n->st.ip >= n->toks.size()) {
        // Needs another token: split the remaining grant over every
        // one-token extension; defer the fork while the split would be zero.
        uint64_t share = grant / alpha.size();
        if (share == 0) break;
        for (uint8_t tok : alpha) {
          auto child = std::make_unique<Node>();
          child->toks = n->toks;
          child->toks.push_back(tok);
          child->st = n->st;
          child->l_bits = n->l_bits + static_cast<uint64_t>(bpt);
          child->reported = n->reported;
          process(std::move(child), share, phase, next);
        }
        return;  // parent replaced by its extensions
      }
      if (grant == 0) break;
      uint64_t allow = std::min(grant, limit - res.global_time);
      uint64_t before = n->st.steps_used;
      Outcome o = run(n->st, n->toks, nullptr, allow);
      uint64_t used = n->st.steps_used - before;
      res.global_time += used;
      grant -= used;
      emit(phase, *n);
      if (res.global_time >= limit) stopped = true;
      if (o == Outcome::Halted || o == Outcome::Error) {
        res.completions.push_back({n->toks, n->l_bits, n->st.steps_used,
                                   res.global_time, o == Outcome::Halted});
        return;  // complete; drop
      }
      if (o == Outcome::BudgetExhausted) break;
      // RequestToken: loop around to fork with whatever grant remains.
    }
    next.push_back(std::move(n));
  }
};

}  // namespace

DovetailResult dovetail(const Task& task, const WeightTable& table,
                        uint64_t global_steps) {
  Sched s;
  s.table = &table;
  s.limit = global_steps;
  s.bpt = bits_per_token(table.alphabet().size());

  std::vector<std::unique_ptr<Node>> live;
  auto root = std::make_unique<Node>();
  root->st = task.initial_state(table);
  live.push_back(std::move(root));

  for (uint64_t i = 1; !s.stopped && !live.empty(); ++i) {
    s.res.phases = i;
    uint64_t granted = 0;
    std::vector<std::unique_ptr<Node>> next;
    for (auto& n : live) {
      uint64_t g = 0;
      if (n->l_bits <= i && i - n->l_bits < 63)
        g = uint64_t{1} << (i - n->l_bits);
      granted += g;
      s.process(std::move(n), g, i, next);
    }
    s.res.phase_allocation.push_back(granted);
    live = std::move(next);
    if (i > 62) break;  // allocation would overflow; unreachable in practice
  }
  return s.res;
}

}  // namespace oops
