// Benchmark: serial reference vs. the OpenMP Monte-Carlo tail kernel.
#include <chrono>
#include <iostream>

#include "oops/guess.hpp"
#include "oops/weights.hpp"

int main(int argc, char** argv) {
  uint64_t samples = argc > 1 ? std::stoull(argv[1]) : 200000;
  int workers = argc > 2 ? std::stoi(argv[2]) : 4;
  auto table = oops::WeightTable::full_uniform();

  auto t0 = std::chrono::steady_clock::now();
  auto serial = oops::speed_prior_tail_serial(samples, 7, table);
  auto t1 = std::chrono::steady_clock::now();
  auto parallel = oops::speed_prior_tail(samples, 7, table, workers);
  auto t2 = std::chrono::steady_clock::now();

  auto ms = [](auto a, auto b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
  };
  bool same = serial.fraction == parallel.fraction;
  std::cout << "samples\t" << samples << "\n"
            << "serial_ms\t" << ms(t0, t1) << "\n"
            << "parallel_ms(" << workers << ")\t" << ms(t1, t2) << "\n"
            << "identical_results\t" << (same ? "yes" : "no") << "\n"
            << "max_t_times_fraction\t" << serial.max_t_times_fraction << "\n";
  return same ? 0 : 1;
}
