#include "oops/task.hpp"

#include <algorithm>

namespace oops {

MachineState Task::initial_state(const WeightTable& weights) const {
  MachineState s;
  s.data_stack = stack_init;
  s.tape = tape_init;
  s.inputs = inputs;
  s.out_cap = out_cap;
  s.weights = weights;
  return s;
}

bool verify_1k2k(const std::vector<int64_t>& out, int64_t k) {
  if (out.size() != static_cast<size_t>(2 * k)) return false;
  for (int64_t i = 0; i < k; ++i)
    if (out[static_cast<size_t>(i)] != 1) return false;
  for (int64_t i = k; i < 2 * k; ++i)
    if (out[static_cast<size_t>(i)] != 2) return false;
  return true;
}

Task make_1k2k(int64_t k) {
  Task t;
  t.id = "1k2k k=" + std::to_string(k);
  t.stack_init = {k};
  t.inputs = {k};
  t.out_cap = static_cast<size_t>(2 * k);
  t.success = [k](const MachineState& s) { return verify_1k2k(s.out_buf, k); };
  return t;
}

bool verify_hanoi(const std::vector<Move>& moves, int64_t k) {
  std::array<std::vector<int64_t>, 3> pegs;
  for (int64_t d = k; d >= 1; --d) pegs[0].push_back(d);  // largest at bottom
  for (const auto& [from, to] : moves) {
    if (from < 0 || from > 2 || to < 0 || to > 2 || from == to) return false;
    if (pegs[static_cast<size_t>(from)].empty()) return false;
    int64_t disk = pegs[static_cast<size_t>(from)].back();
    auto& dst = pegs[static_cast<size_t>(to)];
    if (!dst.empty() && dst.back() < disk) return false;
    pegs[static_cast<size_t>(from)].pop_back();
    dst.push_back(disk);
  }
  return pegs[0].empty() && pegs[1].empty() &&
         pegs[2].size() == static_cast<size_t>(k);
}

static void hanoi_rec(int64_t k, int from, int via, int to,
                      std::vector<Move>& out) {
  if (k == 0) return;
  hanoi_rec(k - 1, from, to, via, out);
  out.emplace_back(from, to);
  hanoi_rec(k - 1, via, from, to, out);
}

std::vector<Move> hanoi_oracle(int64_t k) {
  std::vector<Move> out;
  hanoi_rec(k, 0, 1, 2, out);
  return out;
}

bool verify_hanoi_output(const std::vector<int64_t>& out, int64_t k) {
  if (out.size() % 2 != 0) return false;
  if (k < 0 || k > 60) return false;
  // Allocation-free simulation; this predicate runs on every candidate.
  int64_t pegs[3][61];
  int sz[3] = {0, 0, 0};
  for (int64_t d = k; d >= 1; --d) pegs[0][sz[0]++] = d;
  for (size_t i = 0; i < out.size(); i += 2) {
    int64_t f = out[i], t = out[i + 1];
    if (f < 0 || f > 2 || t < 0 || t > 2 || f == t) return false;
    if (sz[f] == 0) return false;
    int64_t disk = pegs[f][sz[f] - 1];
    if (sz[t] > 0 && pegs[t][sz[t] - 1] < disk) return false;
    sz[f]--;
    pegs[t][sz[t]++] = disk;
  }
  return sz[0] == 0 && sz[1] == 0 && sz[2] == k;
}

Task make_hanoi(int64_t k) {
  Task t;
  t.id = "hanoi k=" + std::to_string(k);
  t.stack_init = {k};
  t.inputs = {k};
  // Peg registers: tape[0] = source, tape[1] = spare, tape[2] = destination.
  t.tape_init[0] = 0;
  t.tape_init[1] = 1;
  t.tape_init[2] = 2;
  t.out_cap = static_cast<size_t>(2 * ((int64_t{1} << k) - 1));
  t.success = [k, cap = t.out_cap](const MachineState& s) {
    // The cap equals the optimal solution length, so nothing shorter can be
    // a legal full transfer; skip the simulation for partial outputs.
    if (s.out_buf.size() != cap) return false;
    return verify_hanoi_output(s.out_buf, k);
  };
  return t;
}

PlantedTask planted_task(const std::vector<uint8_t>& program,
                         const WeightTable& table) {
  PlantedTask p;
  p.program = program;
  MachineState probe;
  probe.weights = table;
  Outcome o = run(probe, program, nullptr, uint64_t{1} << 32);
  // Halted or RequestToken both end a planted program; the caller must
  // supply a terminating one.
  (void)o;
  p.t_steps = probe.steps_used;
  p.prob_num = 1;
  p.prob_den = 1;
  for (uint8_t tok : program) {
    p.prob_num *= table.weight(tok);
    p.prob_den *= table.total();
  }
  std::vector<int64_t> expected = probe.out_buf;
  p.task.id = "planted " + program_to_string(program);
  p.task.out_cap = std::max<size_t>(expected.size(), 1);
  p.task.success = [expected](const MachineState& s) {
    return !expected.empty() && s.out_buf == expected;
  };
  return p;
}

}  // namespace oops
