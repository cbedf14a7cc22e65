#include "oops/machine.hpp"

#include "oops/isa.hpp"

namespace oops {

namespace {

inline bool pop1(MachineState& s, int64_t& a) {
  if (s.data_stack.empty()) return false;
  a = s.data_stack.back();
  s.data_stack.pop_back();
  return true;
}

inline bool pop2(MachineState& s, int64_t& a, int64_t& b) {
  // b is the top of stack, a the value beneath it
  if (s.data_stack.size() < 2) return false;
  b = s.data_stack.back();
  s.data_stack.pop_back();
  a = s.data_stack.back();
  s.data_stack.pop_back();
  return true;
}

inline bool push(MachineState& s, int64_t v) {
  if (s.data_stack.size() >= kDataStackMax) return false;
  s.data_stack.push_back(v);
  return true;
}

inline bool emit(MachineState& s, int64_t v) {
  if (s.out_buf.size() >= s.out_cap) return false;
  s.out_buf.push_back(v);
  return true;
}

inline size_t segment_length(const MachineState& s,
                             std::span<const uint8_t> prefix,
                             const FrozenStore* store) {
  if (s.seg < 0) return prefix.size();
  return store->program(static_cast<size_t>(s.seg)).size();
}

// Transfers control into a function or frozen program body.
inline bool enter(MachineState& s, int32_t seg, uint32_t target_ip,
                  uint32_t ret_ip) {
  if (s.call_stack.size() >= kCallStackMax) return false;
  s.call_stack.push_back({s.seg, ret_ip});
  s.seg = seg;
  s.ip = target_ip;
  return true;
}

// Pop one frame; returns false when the call stack is empty (clean halt).
inline bool leave(MachineState& s) {
  if (s.call_stack.empty()) return false;
  s.seg = s.call_stack.back().seg;
  s.ip = s.call_stack.back().ret_ip;
  s.call_stack.pop_back();
  return true;
}

// Calling convention shared by callf, calltp and the endnp invocation.
// Plain functions: unconditional call. defnp functions: pop k; k == 0 means
// an immediate return, otherwise k-1 is pushed for the body.
inline Outcome call_function(MachineState& s, const MachineState::FuncDef& fn,
                             uint32_t ret_ip) {
  if (fn.np) {
    int64_t k;
    if (!pop1(s, k)) return Outcome::Error;
    if (k == 0) {
      s.ip = ret_ip;
      return Outcome::Continue;
    }
    if (!push(s, k - 1)) return Outcome::Error;
  }
  if (!enter(s, fn.seg, fn.ip, ret_ip)) return Outcome::Error;
  return Outcome::Continue;
}

}  // namespace

Outcome step(MachineState& s, std::span<const uint8_t> prefix,
             const FrozenStore* store) {
  const size_t seg_len = segment_length(s, prefix, store);
  if (s.ip >= seg_len) {
    if (s.seg < 0) return Outcome::RequestToken;  // prefix still growing
    // Ran off the end of a frozen program: implicit return to the caller.
    s.steps_used++;
    if (!leave(s)) return Outcome::Halted;
    return Outcome::Continue;
  }

  const uint8_t tok =
      s.seg < 0 ? prefix[s.ip]
                : store->program(static_cast<size_t>(s.seg))[s.ip];
  const uint32_t cur = s.ip;
  const uint32_t next = cur + 1;
  s.steps_used++;

  // Inside a def/defnp body scan: tokens are recorded, not executed.
  if (s.skip_depth > 0) {
    if (tok == OP_DEF || tok == OP_DEFNP) {
      s.skip_depth++;
    } else if (tok == OP_RET || tok == OP_ENDNP) {
      s.skip_depth--;
      if (s.skip_depth == 0) {
        const bool invoke = s.skip_np && tok == OP_ENDNP;
        const int32_t fn_index = s.skip_func;
        s.skip_func = -1;
        s.skip_np = false;
        if (invoke) {
          return call_function(s, s.functions[static_cast<size_t>(fn_index)],
                               next);
        }
      }
    }
    s.ip = next;
    return Outcome::Continue;
  }

  switch (tok) {
    case OP_C0:
      if (!push(s, 0)) return Outcome::Error;
      break;
    case OP_C1:
      if (!push(s, 1)) return Outcome::Error;
      break;
    case OP_C2:
      if (!push(s, 2)) return Outcome::Error;
      break;
    case OP_INC: {
      int64_t a;
      if (!pop1(s, a) || a == INT64_MAX) return Outcome::Error;
      push(s, a + 1);
      break;
    }
    case OP_DEC: {
      int64_t a;
      if (!pop1(s, a) || a == INT64_MIN) return Outcome::Error;
      push(s, a - 1);
      break;
    }
    case OP_ADD: {
      int64_t a, b, r;
      if (!pop2(s, a, b) || __builtin_add_overflow(a, b, &r))
        return Outcome::Error;
      push(s, r);
      break;
    }
    case OP_SUB: {
      int64_t a, b, r;
      if (!pop2(s, a, b) || __builtin_sub_overflow(a, b, &r))
        return Outcome::Error;
      push(s, r);
      break;
    }
    case OP_MUL: {
      int64_t a, b, r;
      if (!pop2(s, a, b) || __builtin_mul_overflow(a, b, &r))
        return Outcome::Error;
      push(s, r);
      break;
    }
    case OP_EQ: {
      int64_t a, b;
      if (!pop2(s, a, b)) return Outcome::Error;
      push(s, a == b ? 1 : 0);
      break;
    }
    case OP_GT: {
      int64_t a, b;
      if (!pop2(s, a, b)) return Outcome::Error;
      push(s, a > b ? 1 : 0);
      break;
    }
    case OP_DUP: {
      if (s.data_stack.empty()) return Outcome::Error;
      if (!push(s, s.data_stack.back())) return Outcome::Error;
      break;
    }
    case OP_SWAP: {
      int64_t a, b;
      if (!pop2(s, a, b)) return Outcome::Error;
      push(s, b);
      push(s, a);
      break;
    }
    case OP_DROP: {
      int64_t a;
      if (!pop1(s, a)) return Outcome::Error;
      break;
    }
    case OP_LD: {
      int64_t addr;
      if (!pop1(s, addr) || addr < 0 ||
          addr >= static_cast<int64_t>(kTapeSize))
        return Outcome::Error;
      if (!push(s, s.tape[static_cast<size_t>(addr)])) return Outcome::Error;
      break;
    }
    case OP_ST: {
      int64_t val, addr;
      if (!pop2(s, val, addr) || addr < 0 ||
          addr >= static_cast<int64_t>(kTapeSize))
        return Outcome::Error;
      s.tape[static_cast<size_t>(addr)] = val;
      break;
    }
    case OP_BZ_BACK: {
      // Pops the jump target (an absolute index within the current segment,
      // strictly before this instruction) and a flag; jumps when flag != 0.
      int64_t flag, target;
      if (!pop2(s, flag, target)) return Outcome::Error;
      if (flag != 0) {
        if (target < 0 || target >= static_cast<int64_t>(cur))
          return Outcome::Error;
        s.ip = static_cast<uint32_t>(target);
        return Outcome::Continue;
      }
      break;
    }
    case OP_DEF:
    case OP_DEFNP: {
      s.functions.push_back({s.seg, next, tok == OP_DEFNP});
      s.skip_depth = 1;
      s.skip_np = tok == OP_DEFNP;
      s.skip_func = static_cast<int32_t>(s.functions.size()) - 1;
      break;
    }
    case OP_RET:
    case OP_ENDNP: {
      if (!leave(s)) return Outcome::Halted;
      return Outcome::Continue;
    }
    case OP_CALLF: {
      int64_t idx;
      if (!pop1(s, idx) || idx < 0 ||
          idx >= static_cast<int64_t>(s.functions.size()))
        return Outcome::Error;
      return call_function(s, s.functions[static_cast<size_t>(idx)], next);
    }
    case OP_CALLTP: {
      if (s.functions.empty()) return Outcome::Error;
      return call_function(s, s.functions.back(), next);
    }
    case OP_OUT1:
      if (!emit(s, 1)) return Outcome::Error;
      break;
    case OP_OUT2:
      if (!emit(s, 2)) return Outcome::Error;
      break;
    case OP_OUTV: {
      int64_t v;
      if (!pop1(s, v) || !emit(s, v)) return Outcome::Error;
      break;
    }
    case OP_IN: {
      if (s.inputs.empty()) return Outcome::Error;
      if (!push(s, s.inputs[s.in_pos % s.inputs.size()])) return Outcome::Error;
      s.in_pos++;
      break;
    }
    case OP_GETF: {
      int64_t idx;
      if (!pop1(s, idx) || !store || idx < 0 ||
          idx >= static_cast<int64_t>(store->count()))
        return Outcome::Error;
      if (!enter(s, static_cast<int32_t>(idx), 0, next)) return Outcome::Error;
      return Outcome::Continue;
    }
    case OP_BOOST: {
      int64_t tok_id, mult;
      if (!pop2(s, tok_id, mult)) return Outcome::Error;
      if (tok_id < 0 || tok_id >= kAlphabetSize ||
          !s.weights.apply_edit(static_cast<uint8_t>(tok_id), mult))
        return Outcome::Error;
      break;
    }
    case OP_HALT:
      return Outcome::Halted;
    case OP_XFV:
      std::swap(s.tape[0], s.tape[1]);
      break;
    case OP_XVT:
      std::swap(s.tape[1], s.tape[2]);
      break;
    case OP_MV:
      // Hanoi move primitive against the peg registers tape[0..2]: undo the
      // pre-call spare/destination exchange, emit one (source, destination)
      // move, then exchange source and spare for the follow-up transfer.
      std::swap(s.tape[1], s.tape[2]);
      if (!emit(s, s.tape[0]) || !emit(s, s.tape[2])) return Outcome::Error;
      std::swap(s.tape[0], s.tape[1]);
      break;
    default:
      return Outcome::Error;
  }
  s.ip = next;
  return Outcome::Continue;
}

Outcome run(MachineState& s, std::span<const uint8_t> prefix,
            const FrozenStore* store, uint64_t step_budget) {
  const uint64_t limit = s.steps_used + step_budget;
  while (true) {
    if (s.ip >= segment_length(s, prefix, store) && s.seg < 0)
      return Outcome::RequestToken;
    if (s.steps_used >= limit) return Outcome::BudgetExhausted;
    Outcome o = step(s, prefix, store);
    if (o != Outcome::Continue) return o;
  }
}

}  // namespace oops
