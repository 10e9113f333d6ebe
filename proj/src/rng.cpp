#include "survtest/rng.hpp"

#include <cmath>

namespace survtest {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& word : s_) {
    seed += kGolden;
    word = splitmix64_mix(seed);
  }
}

Xoshiro256 Xoshiro256::stream(std::uint64_t master, std::uint64_t index) {
  return Xoshiro256(master ^ splitmix64_mix(index + kGolden));
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

int poisson_inverse(Xoshiro256& rng, double mean) {
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  // The cap guards against u beyond the rounded CDF total.
  const int cap = static_cast<int>(mean + 50.0 * std::sqrt(mean) + 100.0);
  while (u >= cdf && k < cap) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

}  // namespace survtest
