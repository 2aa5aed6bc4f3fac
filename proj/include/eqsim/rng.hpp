#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace eqsim {

std::uint64_t splitmix64_next(std::uint64_t& state);

/// Decorrelated per-task seed: trial i of a run never shares a stream with
/// trial j, independent of how trials are scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0,1)
  double gaussian();
  std::complex<double> complex_gaussian();     // E|z|^2 = 1
  std::uint64_t integer(std::uint64_t bound);  // [0,bound)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eqsim
