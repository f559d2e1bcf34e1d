#pragma once

// Deterministic random streams. Each consumer asks for a stream by name, so
// adding a consumer never shifts the draws of another one.

#include <cstdint>
#include <random>
#include <string_view>

namespace honeygame {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view text);

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::string_view name);
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits; independent of the standard
  /// library's distribution implementations.
  double uniform01();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  std::uint64_t next() { return engine_(); }

  /// A child stream keyed by name, derived from this stream's seed.
  RandomStream fork(std::string_view name) const;

 private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace honeygame
