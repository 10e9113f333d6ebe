#pragma once

#include <array>
#include <cstdint>

namespace survtest {

/// SplitMix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman & Vigna), seeded from SplitMix64.
class Xoshiro256 {
 public:
  static constexpr const char* kAlgorithm =
      "xoshiro256** seeded by splitmix64; stream(seed, i) = splitmix64 sequence from "
      "seed ^ mix(i + 0x9E3779B97F4A7C15)";

  explicit Xoshiro256(std::uint64_t seed);

  /// Independent stream for replication `index` of a run with `master` seed.
  static Xoshiro256 stream(std::uint64_t master, std::uint64_t index);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Poisson(mean) by CDF inversion, sequential search from 0.
int poisson_inverse(Xoshiro256& rng, double mean);

}  // namespace survtest
