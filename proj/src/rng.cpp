#include "eqsim/rng.hpp"

namespace eqsim {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // Two splitmix steps decorrelate adjacent (master, index) pairs.
  std::uint64_t state = master_seed ^ (0xA0761D6478BD642FULL * (index + 1));
  std::uint64_t first = splitmix64_next(state);
  return splitmix64_next(state) ^ first;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double Rng::gaussian() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

std::complex<double> Rng::complex_gaussian() {
  double re = std::normal_distribution<double>(0.0, 1.0)(engine_);
  double im = std::normal_distribution<double>(0.0, 1.0)(engine_);
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

}  // namespace eqsim
