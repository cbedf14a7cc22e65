#include "oops/isa.hpp"

#include <sstream>

namespace oops {

const std::array<InstructionInfo, kAlphabetSize>& instruction_table() {
  static const std::array<InstructionInfo, kAlphabetSize> table = {{
      {"c0", 0, 1},      {"c1", 0, 1},     {"c2", 0, 1},    {"inc", 1, 1},
      {"dec", 1, 1},     {"add", 2, 1},    {"sub", 2, 1},   {"mul", 2, 1},
      {"eq", 2, 1},      {"gt", 2, 1},     {"dup", 1, 2},   {"swap", 2, 2},
      {"drop", 1, 0},    {"ld", 1, 1},     {"st", 2, 0},    {"bz_back", 2, 0},
      {"def", 0, 0},     {"ret", 0, 0},    {"callf", 1, 0}, {"out1", 0, 0},
      {"out2", 0, 0},    {"outv", 1, 0},   {"in", 0, 1},    {"getf", 1, 0},
      {"boost", 2, 0},   {"halt", 0, 0},   {"defnp", 0, 0}, {"calltp", 1, 0},
      {"endnp", 0, 0},   {"xfv", 0, 0},    {"xvt", 0, 0},   {"mv", 0, 0},
  }};
  return table;
}

std::string_view op_name(uint8_t op) {
  return instruction_table()[op].name;
}

std::optional<uint8_t> op_from_name(std::string_view name) {
  const auto& table = instruction_table();
  for (int i = 0; i < kAlphabetSize; ++i) {
    if (name == table[i].name) return static_cast<uint8_t>(i);
  }
  return std::nullopt;
}

std::string program_to_string(const std::vector<uint8_t>& prog) {
  std::string out;
  for (size_t i = 0; i < prog.size(); ++i) {
    if (i) out += ' ';
    out += op_name(prog[i]);
  }
  return out;
}

std::optional<std::vector<uint8_t>> program_from_string(std::string_view text) {
  std::vector<uint8_t> prog;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    auto op = op_from_name(tok);
    if (!op) return std::nullopt;
    prog.push_back(*op);
  }
  return prog;
}

std::string dump_isa() {
  std::ostringstream os;
  const auto& table = instruction_table();
  for (int i = 0; i < kAlphabetSize; ++i) {
    os << i << '\t' << table[i].name << '\t' << table[i].pops << '\t'
       << table[i].pushes << '\n';
  }
  return os.str();
}

}  // namespace oops
