#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oops {

// Token ids are dense 0..kAlphabetSize-1; the order here is frozen because
// frozen-store files, config files and GUESS bit decoding all depend on it.
enum Op : uint8_t {
  OP_C0 = 0,
  OP_C1,
  OP_C2,
  OP_INC,
  OP_DEC,
  OP_ADD,
  OP_SUB,
  OP_MUL,
  OP_EQ,
  OP_GT,
  OP_DUP,
  OP_SWAP,
  OP_DROP,
  OP_LD,
  OP_ST,
  OP_BZ_BACK,
  OP_DEF,
  OP_RET,
  OP_CALLF,
  OP_OUT1,
  OP_OUT2,
  OP_OUTV,
  OP_IN,
  OP_GETF,
  OP_BOOST,
  OP_HALT,
  OP_DEFNP,
  OP_CALLTP,
  OP_ENDNP,
  OP_XFV,
  OP_XVT,
  OP_MV,
  OP_COUNT
};

inline constexpr int kAlphabetSize = OP_COUNT;  // 32; exactly 5 bits per token

struct InstructionInfo {
  const char* name;
  int pops;    // stack operands consumed
  int pushes;  // stack results produced
};

const std::array<InstructionInfo, kAlphabetSize>& instruction_table();

std::string_view op_name(uint8_t op);
std::optional<uint8_t> op_from_name(std::string_view name);

// Token sequence <-> space separated mnemonics.
std::string program_to_string(const std::vector<uint8_t>& prog);
std::optional<std::vector<uint8_t>> program_from_string(std::string_view text);

// Text listing (id, mnemonic, arity), one instruction per line.
std::string dump_isa();

}  // namespace oops
