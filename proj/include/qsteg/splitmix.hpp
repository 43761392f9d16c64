#pragma once

#include <cstdint>

namespace qsteg {

inline constexpr uint64_t kSplitMixIncrement = 0x9E3779B97F4A7C15ull;

// The splitmix64 output function (Stafford variant 13).
constexpr uint64_t SplitMixFinalize(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Sequential splitmix64 stream. Bit-exact: the keyed shuffle and the filler
// bits are part of the wire contract.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

  constexpr uint64_t Next() {
    state_ += kSplitMixIncrement;
    return SplitMixFinalize(state_);
  }

  // Unbiased draw in [0, bound) by rejecting the lowest 2^64 mod bound
  // outputs. bound must be nonzero.
  constexpr uint64_t Below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t x = Next();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1].
  double UniformOpenZero() {
    return static_cast<double>((Next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

}  // namespace qsteg
