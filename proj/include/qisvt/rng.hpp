#pragma once

#include <cstdint>
#include <random>

namespace qisvt {

using Rng = std::mt19937_64;

// SplitMix64 step; used to decorrelate (seed, stream) pairs before seeding
// the main engine so that nearby seeds / stream ids give unrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Every randomized operation takes an explicit engine; no global state.
// Independent streams (per trial, per worker) come from the same seed with
// distinct stream ids.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t mixed = splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
  return Rng(mixed);
}

inline double uniform01(Rng& rng) {
  // 53-bit uniform in [0,1)
  return (rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n); Lemire multiply-shift with rejection.
// Self-contained so sampling streams reproduce across standard libraries
// (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t t = (0 - n) % n;
    while (lo < t) {
      m = static_cast<unsigned __int128>(rng()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace qisvt
