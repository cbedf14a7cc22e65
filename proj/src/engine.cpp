#include "oops/engine.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>

namespace oops {

namespace {

constexpr uint64_t kUnlimited = UINT64_MAX;

// Largest number of additional instructions s the current prefix may run
// before n * (t0 + s) * den > num * (T0 + s); the scheduler clock advances
// together with the prefix's own runtime.
uint64_t step_budget(const BigInt& num, const BigInt& den, uint64_t t0,
                     uint64_t T0, uint32_t n) {
  BigInt coef = BigInt(n) * den - num;
  if (coef <= 0) return kUnlimited;
  BigInt slack = num * T0 - BigInt(n) * den * t0;
  if (slack < 0) return 0;
  BigInt s = slack / coef;
  if (s >= kUnlimited) return kUnlimited - 1;
  return static_cast<uint64_t>(s);
}

// Smallest token weight for which a child of this node gets a nonzero
// budget right now; below it the whole (weight-sorted) remainder of the
// child list can be skipped at once.
uint32_t child_weight_floor(const BigInt& num, const BigInt& den, uint64_t W,
                            uint64_t t0, uint64_t T, uint32_t n) {
  // A child of weight w qualifies iff num*w*(T+1) >= n*(t0+1)*den*W.
  BigInt rhs = BigInt(n) * (t0 + 1) * den * W;
  BigInt lhs_unit = num * (T + 1);
  BigInt w_min = (rhs + lhs_unit - 1) / lhs_unit;
  if (w_min > kWeightCap) return kWeightCap + 1;
  if (w_min < 1) return 1;
  return static_cast<uint32_t>(w_min);
}

using u128 = unsigned __int128;

// Fast-path analogue of step_budget; all operands are pre-bounded by the
// caller so every intermediate product fits in 128 bits.
uint64_t step_budget128(u128 num, u128 den, uint64_t t0, uint64_t T0,
                        uint32_t n) {
  u128 nden = (u128)n * den;
  if (nden <= num) return kUnlimited;
  u128 coef = nden - num;
  u128 need = nden * t0;
  u128 have = num * T0;
  if (have < need) return 0;
  u128 s = (have - need) / coef;
  if (s >= kUnlimited) return kUnlimited - 1;
  return static_cast<uint64_t>(s);
}

uint32_t child_weight_floor128(uint64_t num, uint64_t den, uint64_t W,
                               uint64_t t0, uint64_t T, uint32_t n) {
  u128 rhs = (u128)n * (t0 + 1) * den;
  rhs *= W;
  u128 lhs_unit = (u128)num * (T + 1);
  u128 w_min = (rhs + lhs_unit - 1) / lhs_unit;
  if (w_min > kWeightCap) return kWeightCap + 1;
  if (w_min < 1) return 1;
  return static_cast<uint32_t>(w_min);
}

struct TaskRun {
  MachineState st;
  bool waiting = false;
};

struct Node {
  size_t prefix_len = 0;
  BigInt num = 1, den = 1;
  uint64_t num64 = 1, den64 = 1;  // valid when fits
  bool fits = true;               // probability fits the 128-bit fast path
  std::vector<TaskRun> runs;     // branch-point states, all at RequestToken
  std::vector<uint16_t> active;  // task indices, parallel to runs
  uint64_t t_sum = 0;            // sum of runtimes over active tasks
  std::shared_ptr<const std::vector<uint8_t>> order;  // continuation order
  size_t child_pos = 0;
};

}  // namespace

struct PrefixSearch::Impl {
  std::vector<const Task*> tasks;
  WeightTable init_weights;
  uint32_t n_factor;
  std::vector<uint8_t> base;
  const FrozenStore* store;
  SearchObserver* obs;

  std::vector<uint8_t> prefix;
  // Node pool: entries [0, depth) are live. Popped nodes keep their buffers
  // so a later push at the same depth reuses the allocations.
  std::vector<Node> stack;
  size_t depth = 0;

  enum class Mode { Executing, Expanding };
  Mode mode = Mode::Executing;
  std::vector<TaskRun> exec_runs;
  std::vector<uint16_t> exec_active;
  // Probability of the prefix under test: 64-bit pair while it fits (the
  // common case), arbitrary precision beyond that.
  bool exec_fits = true;
  uint64_t exec_num64 = 1, exec_den64 = 1;
  BigInt exec_num = 1, exec_den = 1;
  uint64_t budget_left = kUnlimited;
  size_t rr = 0;

  uint64_t clock = 0;
  Status status = Status::Running;
  std::vector<uint8_t> solution;
  BigInt sol_num = 1, sol_den = 1;

  // Continuation-order cache; almost every branch shares the initial table.
  std::shared_ptr<const std::vector<uint8_t>> order_cache;
  uint64_t order_cache_version = UINT64_MAX;

  // Charges one bootstrap tick (more while the root budget is still zero)
  // and rebuilds the root execution state.
  void start_pass() {
    clock++;
    while (true) {
      budget_left = step_budget(1, 1, 0, clock, n_factor);
      if (budget_left > 0) break;
      clock++;
    }
    prefix = base;
    depth = 0;
    exec_runs.clear();
    exec_active.clear();
    for (size_t i = 0; i < tasks.size(); ++i) {
      exec_runs.push_back({tasks[i]->initial_state(init_weights), false});
      exec_active.push_back(static_cast<uint16_t>(i));
    }
    exec_fits = true;
    exec_num64 = 1;
    exec_den64 = 1;
    exec_num = 1;
    exec_den = 1;
    rr = 0;
    mode = Mode::Executing;
  }

  uint64_t exec_t_sum() const {
    uint64_t t = 0;
    for (const auto& r : exec_runs) t += r.st.steps_used;
    return t;
  }

  void solved() {
    status = Status::Solved;
    solution = prefix;
    sol_num = exec_fits ? BigInt(exec_num64) : exec_num;
    sol_den = exec_fits ? BigInt(exec_den64) : exec_den;
  }

  // Removes task slot `slot` (index into exec_runs/exec_active) as solved.
  void remove_solved(size_t slot) {
    exec_runs.erase(exec_runs.begin() + static_cast<ptrdiff_t>(slot));
    exec_active.erase(exec_active.begin() + static_cast<ptrdiff_t>(slot));
    if (rr > slot) rr--;
    if (exec_active.empty()) solved();
  }

  // The tested prefix is dead (error, wrong halt, or budget trigger).
  // Returns true when the transition consumed a tick.
  bool discard_child(bool fatal) {
    if (depth == 0) {
      // The seeded base itself stopped: a fatal stop can never be outgrown,
      // a budget stop is retried on the next pass with a larger clock.
      if (fatal) {
        status = Status::Dead;
        return false;
      }
      start_pass();
      return true;
    }
    prefix.pop_back();
    mode = Mode::Expanding;
    return false;
  }

  void push_node() {
    if (depth == stack.size()) stack.emplace_back();
    Node& node = stack[depth++];
    node.prefix_len = prefix.size();
    node.fits = exec_fits && n_factor <= 16;
    if (node.fits) {
      node.num64 = exec_num64;
      node.den64 = exec_den64;
      node.num = exec_num64;
      node.den = exec_den64;
    } else {
      node.num = exec_num;
      node.den = exec_den;
    }
    // Copy (not move): the exec buffers stay alive so that later child
    // creations reuse their capacity instead of reallocating every state.
    node.runs = exec_runs;
    node.active = exec_active;
    node.t_sum = 0;
    node.child_pos = 0;
    for (const auto& r : node.runs) node.t_sum += r.st.steps_used;
    const WeightTable& table = node.runs.front().st.weights;
    if (table.version() != order_cache_version) {
      order_cache = std::make_shared<const std::vector<uint8_t>>(
          table.ordered_continuations());
      order_cache_version = table.version();
    }
    node.order = order_cache;
    mode = Mode::Expanding;
  }

  bool pop_node() {
    depth--;
    if (depth == 0) {
      start_pass();  // reachable tree exhausted at this clock; go deeper
      return true;
    }
    prefix.pop_back();
    mode = Mode::Expanding;
    return false;
  }

  // Advances one VM instruction, or transitions modes. Returns true when a
  // tick was consumed.
  bool do_exec() {
    // Next active, non-waiting run; round-robin, one instruction per turn.
    size_t live = exec_active.size();
    size_t probed = 0;
    while (probed < live && exec_runs[rr % live].waiting) {
      rr++;
      probed++;
    }
    if (live == 0 || probed == live) {
      push_node();
      return false;
    }
    size_t slot = rr % live;
    rr++;
    TaskRun& run = exec_runs[slot];
    const Task& task = *tasks[exec_active[slot]];
    const size_t task_index = exec_active[slot];

    Outcome o = step(run.st, prefix, store);
    if (o == Outcome::RequestToken) {
      run.waiting = true;  // no instruction executed, no tick
      if (task.success(run.st)) {
        if (obs) obs->terminal(prefix, task_index, o, true);
        remove_solved(slot);
      }
      return false;
    }

    clock++;
    if (budget_left != kUnlimited) budget_left--;
    if (obs)
      obs->exec_step(exec_fits ? BigInt(exec_num64) : exec_num,
                     exec_fits ? BigInt(exec_den64) : exec_den, exec_t_sum(),
                     clock);

    switch (o) {
      case Outcome::Continue:
        if (budget_left == 0) discard_child(false);
        break;
      case Outcome::Halted: {
        bool ok = task.success(run.st);
        if (obs) obs->terminal(prefix, task_index, o, ok);
        if (ok)
          remove_solved(slot);
        else
          discard_child(true);
        break;
      }
      case Outcome::Error:
        if (obs) obs->terminal(prefix, task_index, o, false);
        discard_child(true);
        break;
      default:
        assert(false);
    }
    return true;
  }

  // Tries the next child of the top node. Returns true when a tick was spent.
  bool do_expand() {
    Node& node = stack[depth - 1];
    const auto& order = *node.order;
    if (node.child_pos >= order.size()) return pop_node();

    const WeightTable& table = node.runs.front().st.weights;
    const bool fast = node.fits && clock < (uint64_t{1} << 34);
    uint32_t floor =
        fast ? child_weight_floor128(node.num64, node.den64, table.total(),
                                     node.t_sum, clock, n_factor)
             : child_weight_floor(node.num, node.den, table.total(),
                                  node.t_sum, clock, n_factor);
    uint8_t tok = order[node.child_pos];
    if (table.weight(tok) < floor) {
      // order is weight-sorted: everything from here on is below the floor.
      node.child_pos = order.size();
      return false;
    }
    node.child_pos++;

    uint64_t budget;
    if (fast) {
      budget = step_budget128((u128)node.num64 * table.weight(tok),
                              (u128)node.den64 * table.total(), node.t_sum,
                              clock, n_factor);
    } else {
      budget = step_budget(node.num * table.weight(tok),
                           node.den * table.total(), node.t_sum, clock,
                           n_factor);
    }
    clock++;  // child creation charge
    if (budget == 0) return true;

    prefix.push_back(tok);
    if (node.fits) {
      u128 cn = (u128)node.num64 * table.weight(tok);
      u128 cd = (u128)node.den64 * table.total();
      exec_fits = cd < ((u128)1 << 63);
      if (exec_fits) {
        exec_num64 = static_cast<uint64_t>(cn);
        exec_den64 = static_cast<uint64_t>(cd);
      }
    } else {
      exec_fits = false;
    }
    if (!exec_fits) {
      exec_num = node.num * table.weight(tok);
      exec_den = node.den * table.total();
    }
    exec_runs = node.runs;  // branch-point snapshot copy
    for (auto& r : exec_runs) r.waiting = false;
    exec_active = node.active;
    budget_left = budget;
    rr = 0;
    mode = Mode::Executing;
    return true;
  }

  Status tick() {
    if (status != Status::Running) return status;
    while (true) {
      bool spent = mode == Mode::Executing ? do_exec() : do_expand();
      if (status != Status::Running || spent) return status;
    }
  }
};

PrefixSearch::PrefixSearch(std::vector<const Task*> tasks,
                           const WeightTable& weights, uint32_t n_factor,
                           std::vector<uint8_t> base, const FrozenStore* store,
                           SearchObserver* observer)
    : impl_(std::make_unique<Impl>()) {
  impl_->tasks = std::move(tasks);
  impl_->init_weights = weights;
  impl_->n_factor = std::max<uint32_t>(1, n_factor);
  impl_->base = std::move(base);
  impl_->store = store;
  impl_->obs = observer;
  impl_->start_pass();
}

PrefixSearch::~PrefixSearch() = default;
PrefixSearch::PrefixSearch(PrefixSearch&&) noexcept = default;
PrefixSearch& PrefixSearch::operator=(PrefixSearch&&) noexcept = default;

PrefixSearch::Status PrefixSearch::tick() { return impl_->tick(); }
PrefixSearch::Status PrefixSearch::status() const { return impl_->status; }
uint64_t PrefixSearch::clock() const { return impl_->clock; }
const std::vector<uint8_t>& PrefixSearch::solution() const {
  return impl_->solution;
}
const BigInt& PrefixSearch::solution_prob_num() const { return impl_->sol_num; }
const BigInt& PrefixSearch::solution_prob_den() const { return impl_->sol_den; }

std::string SolveReport::to_tsv() const {
  std::ostringstream os;
  os << "task_id\tsolved\tprogram\tprob\tsteps_A\tsteps_B\n";
  for (const auto& r : rows) {
    os << r.task_id << '\t' << (r.solved ? 1 : 0) << '\t' << r.program << '\t'
       << r.prob << '\t' << r.steps_a << '\t' << r.steps_b << '\n';
  }
  return os.str();
}

SolveReport solve_sequence(const std::vector<Task>& tasks,
                           const SearchConfig& config, FrozenStore& store) {
  SolveReport report;
  for (size_t t = 0; t < tasks.size(); ++t) {
    std::vector<const Task*> all;
    for (size_t i = 0; i <= t; ++i) all.push_back(&tasks[i]);
    // Search A: fresh prefixes, tested on every task up to the new one.
    PrefixSearch fresh(all, config.weights, config.n_factor, {}, &store,
                       config.observer);
    // Search B: continuations of the last frozen program, new task only.
    std::optional<PrefixSearch> focused;
    if (store.count() > 0) {
      focused.emplace(std::vector<const Task*>{&tasks[t]}, config.weights,
                      config.n_factor, store.program(store.count() - 1), &store,
                      config.observer);
    }

    SolveReport::Row row;
    row.task_id = tasks[t].id;
    PrefixSearch* winner = nullptr;
    while (true) {
      bool a_live = fresh.status() == PrefixSearch::Status::Running;
      bool b_live =
          focused && focused->status() == PrefixSearch::Status::Running;
      if (!a_live && !b_live) break;
      if (report.total_steps + row.steps_a + row.steps_b >=
          config.global_step_ceiling) {
        report.ceiling_exhausted = true;
        report.exhausted_task = static_cast<int>(t);
        break;
      }
      if (a_live) {
        row.steps_a++;
        if (fresh.tick() == PrefixSearch::Status::Solved) {
          winner = &fresh;
          break;
        }
      }
      if (b_live) {
        row.steps_b++;
        if (focused->tick() == PrefixSearch::Status::Solved) {
          winner = &*focused;
          break;
        }
      }
    }

    report.total_steps += row.steps_a + row.steps_b;
    if (winner) {
      row.solved = true;
      row.program = program_to_string(winner->solution());
      std::ostringstream prob;
      prob << winner->solution_prob_num() << '/' << winner->solution_prob_den();
      row.prob = prob.str();
      store.freeze(winner->solution());
      report.rows.push_back(std::move(row));
    } else {
      report.rows.push_back(std::move(row));
      for (size_t i = t + 1; i < tasks.size(); ++i) {
        SolveReport::Row rest;
        rest.task_id = tasks[i].id;
        report.rows.push_back(std::move(rest));
      }
      break;
    }
  }
  return report;
}

}  // namespace oops
