#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace hpssd {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to turn (key, counter) tuples into well mixed
// 64-bit seeds so every run and every stage of a run owns its own stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed of substream `counter` under `key`. Pure function of its arguments.
constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(splitmix64(key) ^ splitmix64(counter + 0x632BE59BD9B4E019ull));
}

inline Rng make_rng(std::uint64_t key, std::uint64_t counter) {
  return Rng{derive_seed(key, counter)};
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace hpssd
