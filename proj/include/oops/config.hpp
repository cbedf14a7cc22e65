#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oops/task.hpp"
#include "oops/weights.hpp"

namespace oops {

// One experiment description, assembled from a line-oriented `key value`
// file. Unknown keys are rejected with the offending line number.
struct RunSetup {
  WeightTable weights;       // alphabet + weight lines; default full uniform
  std::vector<Task> tasks;   // in file order
  uint32_t n_factor = 1;
  uint64_t ceiling = uint64_t{10'000'000'000};
  int workers = 1;
  uint64_t seed = 0;
  uint64_t samples = 100000;
  uint64_t global_steps = uint64_t{1} << 20;
  int64_t gamma_num = 1, gamma_den = 2;
  std::string frozen_load;   // optional path to a frozen-store file
};

struct ConfigResult {
  bool ok = false;
  std::string error;  // "line N: ..." when !ok
  RunSetup setup;
};

ConfigResult parse_config(const std::string& text);
ConfigResult parse_config_file(const std::string& path);

}  // namespace oops
