#include "oops/weights.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace oops {

namespace {
uint64_t next_version() {
  static std::atomic<uint64_t> counter{0};
  return counter.fetch_add(1, std::memory_order_relaxed) + 1;
}
}  // namespace

WeightTable::WeightTable(std::vector<uint8_t> alphabet)
    : alphabet_(std::move(alphabet)) {
  std::sort(alphabet_.begin(), alphabet_.end());
  for (uint8_t tok : alphabet_) weight_[tok] = 1;
  total_ = alphabet_.size();
  version_ = next_version();
}

void WeightTable::set_weight(uint8_t tok, uint32_t w) {
  w = std::max<uint32_t>(1, std::min(w, kWeightCap));
  total_ -= weight_[tok];
  weight_[tok] = w;
  total_ += w;
  version_ = next_version();
}

bool WeightTable::apply_edit(uint8_t tok, int64_t mult) {
  if (tok >= kAlphabetSize || !enabled(tok) || mult < 1) return false;
  uint64_t w = static_cast<uint64_t>(weight_[tok]) * static_cast<uint64_t>(mult);
  set_weight(tok, static_cast<uint32_t>(std::min<uint64_t>(w, kWeightCap)));
  return true;
}

std::vector<uint8_t> WeightTable::ordered_continuations() const {
  std::vector<uint8_t> order = alphabet_;
  std::stable_sort(order.begin(), order.end(), [this](uint8_t a, uint8_t b) {
    if (weight_[a] != weight_[b]) return weight_[a] > weight_[b];
    return a < b;
  });
  return order;
}

WeightTable WeightTable::full_uniform() {
  std::vector<uint8_t> all(kAlphabetSize);
  std::iota(all.begin(), all.end(), 0);
  return WeightTable(std::move(all));
}

}  // namespace oops
