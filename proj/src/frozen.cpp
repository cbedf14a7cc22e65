#include "oops/frozen.hpp"

#include <sstream>

#include "oops/isa.hpp"

namespace oops {

std::string FrozenStore::to_text() const {
  std::ostringstream os;
  for (size_t i = 0; i < programs_.size(); ++i) {
    os << i << ' ' << program_to_string(programs_[i]) << '\n';
  }
  return os.str();
}

std::optional<FrozenStore> FrozenStore::from_text(const std::string& text) {
  FrozenStore store;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    size_t index;
    if (!(ls >> index) || index != store.count()) return std::nullopt;
    std::string rest;
    std::getline(ls, rest);
    auto prog = program_from_string(rest);
    if (!prog) return std::nullopt;
    store.freeze(std::move(*prog));
  }
  return store;
}

}  // namespace oops
