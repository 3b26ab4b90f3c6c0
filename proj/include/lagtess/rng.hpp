// Deterministic random streams. splitmix64 is used for seeding and for
// deriving child streams; xoshiro256++ (fixed reference constants) is the
// main generator. All draws are built from integer operations plus one
// documented conversion to double, so identical seeds give identical
// streams on every platform.
//
// Child-stream derivation: state seed = sm(sm(sm(root) ^ fnv1a64(tag)) ^ index),
// where sm is the splitmix64 step. Each (tag, index) pair labels one
// independent purpose, e.g. ("study-rep", replication number).
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lagtess {

inline std::uint64_t splitmix64_step(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char ch : s) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_step(s);
  }

  static Rng child(std::uint64_t root, std::string_view tag, std::uint64_t index) {
    std::uint64_t s = root;
    std::uint64_t x = splitmix64_step(s);
    s = x ^ fnv1a64(tag);
    x = splitmix64_step(s);
    s = x ^ index;
    x = splitmix64_step(s);
    return Rng(x);
  }

  // xoshiro256++
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // 53-bit mantissa in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Exact Poisson draw by exponential spacings; cost is O(mean) uniforms.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::uint64_t n = 0;
    double acc = 0.0;
    while (true) {
      acc += -std::log1p(-uniform01());
      if (acc > mean) break;
      ++n;
    }
    return n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace lagtess
