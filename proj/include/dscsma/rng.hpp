#pragma once
// Deterministic, platform-independent pseudo-random streams.
//
// SplitMix64 expands seeds; xoshiro256** 1.0 generates the draw streams.
// Both are the public-domain algorithms by Blackman & Vigna
// (https://prng.di.unimi.it/). std::uniform_int_distribution is avoided on
// purpose: its mapping from engine output to values is implementation
// defined, and simulator output must be byte-identical for a given seed on
// every platform. Contention windows are always powers of two, so window
// draws are plain bit masks; the general bounded draw uses rejection.

#include <cassert>
#include <cstdint>

namespace dscsma {

struct SplitMix64 {
  std::uint64_t state;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// One-shot avalanche mix (SplitMix64 step applied to x).
constexpr std::uint64_t mix64(std::uint64_t x) { return SplitMix64(x).next(); }

// Decorrelated seed for sub-stream `stream` of a base seed. Used to give
// every TCPair (and every replicate) its own independent generator.
constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + 0x9E3779B97F4A7C15ull));
}

class Xoshiro256StarStar {
 public:
  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) : s_{} {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  constexpr std::uint64_t next() {
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

  // Uniform on [0, 1) with 53 random bits.
  constexpr double next_double() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform on [0, w) for w a power of two.
  constexpr std::uint32_t uniform_pow2(std::uint32_t w) {
    assert(w >= 1 && (w & (w - 1)) == 0);
    return static_cast<std::uint32_t>(next() & (w - 1));
  }

  // Uniform on [0, bound) for any bound >= 1, unbiased via rejection.
  constexpr std::uint64_t uniform_below(std::uint64_t bound) {
    assert(bound >= 1);
    const std::uint64_t t = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= t) return r % bound;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace dscsma
