#pragma once

#include <bit>
#include <cstdint>

// Counter-based pseudo-random numbers. Every draw is a pure function of
// (stream key, counter), so streams can be evaluated in any order, any lane
// width, or any thread and still produce the same values. The generator is
// the SplitMix64 output function applied to key + counter * golden ratio,
// i.e. SplitMix64 itself evaluated at an arbitrary sequence position.

namespace dcsim::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t draw_at(std::uint64_t key, std::uint64_t counter) {
  return mix(key + counter * kGolden);
}

/// Hash-combines up to three words with a seed into a stream key.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix(seed ^ 0x2545F4914F6CDD1Dull);
  h = mix(h ^ mix(a + kGolden));
  h = mix(h ^ mix(b + 2 * kGolden));
  h = mix(h ^ mix(c + 3 * kGolden));
  return h;
}

/// Maps 64 random bits to a double strictly inside (0, 1).
inline double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Sequential stream view over the counter space of one key.
struct Stream {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  explicit Stream(std::uint64_t k) : key(k) {}

  std::uint64_t next_u64() { return draw_at(key, ++counter); }
  double next_unit() { return to_unit(next_u64()); }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
  }
};

}  // namespace dcsim::rng
