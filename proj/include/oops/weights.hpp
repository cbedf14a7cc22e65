#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "oops/isa.hpp"

namespace oops {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr uint32_t kWeightCap = 1u << 20;

// Integer-weight distribution over the enabled tokens. Probability of token
// t is exactly w[t]/total; everything downstream stays in exact rationals.
class WeightTable {
 public:
  WeightTable() = default;

  // `alphabet` lists the enabled token ids, ascending. Unlisted tokens have
  // weight 0 and are never offered as continuations.
  explicit WeightTable(std::vector<uint8_t> alphabet);

  const std::vector<uint8_t>& alphabet() const { return alphabet_; }
  bool enabled(uint8_t tok) const { return weight_[tok] > 0; }

  uint32_t weight(uint8_t tok) const { return weight_[tok]; }
  uint64_t total() const { return total_; }

  // Requires an enabled token; clamps the result at kWeightCap.
  void set_weight(uint8_t tok, uint32_t w);
  // boost edit: w[tok] *= mult. Returns false on a disabled token or mult < 1.
  bool apply_edit(uint8_t tok, int64_t mult);

  // Tokens sorted by descending weight, ties by ascending id.
  std::vector<uint8_t> ordered_continuations() const;

  // Changes with every mutation (process-globally unique); lets callers
  // cache derived data such as the continuation ordering.
  uint64_t version() const { return version_; }

  bool operator==(const WeightTable& o) const {
    return alphabet_ == o.alphabet_ && weight_ == o.weight_ &&
           total_ == o.total_;
  }

  static WeightTable full_uniform();

 private:
  std::vector<uint8_t> alphabet_;
  std::array<uint32_t, kAlphabetSize> weight_{};
  uint64_t total_ = 0;
  uint64_t version_ = 0;
};

// A growing token sequence with its exact accumulated probability: the
// product of w[token]/total in effect at each selection moment.
struct Prefix {
  std::vector<uint8_t> tokens;
  BigInt prob_num = 1;
  BigInt prob_den = 1;

  size_t length() const { return tokens.size(); }
  void extend(uint8_t tok, const WeightTable& table) {
    tokens.push_back(tok);
    prob_num *= table.weight(tok);
    prob_den *= table.total();
  }
};

}  // namespace oops
