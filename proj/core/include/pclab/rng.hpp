#pragma once

#include <cstdint>
#include <random>

namespace pclab {

// Deterministic uniform doubles. std::uniform_real_distribution is not
// bit-stable across standard libraries, which would break byte-identical
// CSV output, so the mapping from raw 64-bit draws is done by hand.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  uint64_t raw() { return gen_(); }

  // Derive an independent stream; used to give sweep points stable seeds.
  static uint64_t mix(uint64_t seed, uint64_t salt) {
    uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + salt * 0xbf58476d1ce4e5b9ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pclab
