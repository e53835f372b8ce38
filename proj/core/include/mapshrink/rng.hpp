#pragma once

#include <cstdint>
#include <random>

namespace mapshrink {

/// Purpose tags for deriving independent random streams from one master seed.
/// Every random draw in the library flows through stream_key(master, purpose,
/// ...indices), so trials can be generated in any order (or concurrently)
/// without changing the data any single trial sees.
enum class Stream : std::uint64_t {
  beta = 1,       // beta vector draws (one per trial)
  factor = 2,     // factor returns X (one per block)
  residual = 3,   // idiosyncratic returns Z (one per block)
  haar = 4,       // random anchor subspace draws
  fixture = 5,    // synthetic historical beta panel
  trial = 6,      // per-trial seed derivation in the experiment driver
};

/// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives the seed of one purpose-specific stream. Chained mixing keeps
/// distinct (purpose, a, b, c) tuples on distinct streams.
constexpr std::uint64_t stream_key(std::uint64_t master, Stream purpose,
                                   std::uint64_t a = 0, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
  std::uint64_t k = mix64(master);
  k = mix64(k ^ static_cast<std::uint64_t>(purpose));
  k = mix64(k ^ a);
  k = mix64(k ^ b);
  return mix64(k ^ c);
}

inline std::mt19937_64 make_engine(std::uint64_t key) {
  return std::mt19937_64{key};
}

}  // namespace mapshrink
