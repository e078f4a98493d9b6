#pragma once

#include <cstdint>
#include <random>

namespace negmine {

using Rng = std::mt19937_64;

/// Fixed per-module stream offsets. Each module draws from its own stream so
/// that consuming numbers in one module never shifts another module's draws.
enum class Stream : std::uint64_t {
  Positives = 0x504f53,   // "POS"
  Grouping = 0x475250,    // "GRP"
  Synthetic = 0x53594e,   // "SYN"
  BiasTrials = 0x424941,  // "BIA"
  OracleSpaces = 0x4f5243,  // "ORC"
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Generator for (seed, stream, index). `index` separates independent
/// sub-streams such as Monte-Carlo trials.
inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
  s = splitmix64(s ^ index);
  return Rng(s);
}

}  // namespace negmine
