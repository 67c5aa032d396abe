#pragma once

#include <cstdint>

namespace cfmetrics {

// SplitMix64 (Steele/Lea/Vigna fixed-increment variant). The whole state is
// one 64-bit word and the sequence is pinned by the constants below, so runs
// are reproducible across platforms and implementations. Every report that
// carries random results records this generator by name.
inline constexpr const char* kRngName = "splitmix64";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound); bound >= 1. Rejection keeps the draw unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

// Sub-seed for a (seed, stream) pair: the stream-th element of the SplitMix64
// sequence seeded with `seed`. Gives every trial or partition its own
// generator while keeping the whole run a pure function of one seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(seed + stream * 0x9e3779b97f4a7c15ULL).next();
}

}  // namespace cfmetrics
