#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oops {

// Append-only store of solved-task programs p^1..p^n. Entries are never
// mutated after freeze(); running code addresses them by index via getf.
class FrozenStore {
 public:
  size_t freeze(std::vector<uint8_t> program) {
    programs_.push_back(std::move(program));
    return programs_.size() - 1;
  }

  size_t count() const { return programs_.size(); }
  const std::vector<uint8_t>& program(size_t i) const { return programs_[i]; }

  // Text persistence: one line per program, "<index> <mnemonic...>".
  std::string to_text() const;
  static std::optional<FrozenStore> from_text(const std::string& text);

  bool operator==(const FrozenStore&) const = default;

 private:
  std::vector<std::vector<uint8_t>> programs_;
};

}  // namespace oops
