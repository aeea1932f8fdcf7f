#pragma once

#include <cstdint>
#include <random>

namespace coexist {

using Rng = std::mt19937_64;

/// Independent random streams of one simulation run.
enum class Stream : std::uint64_t {
  Placement = 1,
  Fading = 2,
  Traffic = 3,
  Policy = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream keyed by (seed, purpose); streams of different purposes or seeds
/// do not overlap in practice and never depend on each other's consumption.
inline Rng make_stream(std::uint64_t seed, Stream purpose) {
  const std::uint64_t key = mix64(mix64(seed) ^ static_cast<std::uint64_t>(purpose));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Rng(seq);
}

}  // namespace coexist
