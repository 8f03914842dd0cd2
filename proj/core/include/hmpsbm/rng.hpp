#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hmpsbm {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser; a good 64-bit mixing function.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a tuple of
/// counters (e.g. {kind, layer, node}). Pure function of its arguments, so
/// streams can be created in any order or on any thread.
std::uint64_t stream_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

inline Engine make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
  return Engine(stream_seed(base, counters));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace hmpsbm
