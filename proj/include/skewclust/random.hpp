#pragma once

// Counter-based random numbers: every draw is a pure function of its key.

#include <cstdint>
#include <initializer_list>

namespace skewclust {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash of a seed and a sequence of counters.
constexpr std::uint64_t keyed_hash(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double keyed_uniform(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  return static_cast<double>(keyed_hash(seed, keys) >> 11) * 0x1.0p-53;
}

/// Independent child seed, e.g. one per restart or per graph.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return keyed_hash(seed, {0xd1b54a32d192ed03ULL, stream});
}

}  // namespace skewclust
