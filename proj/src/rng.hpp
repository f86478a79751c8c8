#pragma once

#include <cstdint>

namespace dysparse {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Small deterministic generator. Used everywhere seeded behaviour is part of
// the contract; std:: distributions are implementation-defined and avoided.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_next(state_); }

  // Uniform in [0, 1), 53 bits of mantissa.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). Lemire multiply-shift; bias is negligible for the
  // bounds used here and the mapping is reproducible across platforms.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t hash_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Per-walker stream seed. Depends only on the three inputs, so walker i's
// stream is identical no matter how walks are scheduled across threads.
inline std::uint64_t walker_seed(std::uint64_t global_seed, std::uint64_t update_id,
                                 std::uint64_t walker_index) {
  std::uint64_t h = hash_mix(global_seed + 0x9E3779B97F4A7C15ull);
  h = hash_mix(h ^ (update_id + 0xBF58476D1CE4E5B9ull));
  return hash_mix(h ^ (walker_index + 0x94D049BB133111EBull));
}

}  // namespace dysparse
