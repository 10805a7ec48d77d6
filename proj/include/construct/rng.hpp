#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace construct {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed for worker/graph `stream` from a base seed.
/// Outputs depend only on (seed, stream), never on thread scheduling.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Lemire-style rejection keeps it unbiased.
inline std::uint64_t uniform_index(std::uint64_t bound, Rng& rng) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Draws an index from an unnormalized non-negative weight vector.
/// Returns the last positive-weight index on round-off overshoot.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

/// Fisher-Yates shuffle driven by uniform_index (portable across standard libraries).
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(i, rng);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace construct
