#pragma once

#include <cstdint>

namespace gibbs {

// SplitMix64 (Steele, Lea, Flood 2014). Eight bytes of state, so every
// particle can own an independent stream and results do not depend on how
// particles are distributed over worker threads.
struct SplitMix64 {
  std::uint64_t state = 0;

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

/// Seed splitting: stream `k` of a master seed is the first output of a
/// SplitMix64 generator started at master + k * golden-ratio increment.
/// Stream 0 seeds initial conditions; stream 1 + i seeds particle i.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  SplitMix64 g{master + 0x632be59bd9b4e019ULL * (stream + 1)};
  return g.next();
}

}  // namespace gibbs
