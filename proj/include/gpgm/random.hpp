#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gpgm {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed splitting: the seed of stream (base, c0, c1, ...)
/// depends only on its coordinates, never on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t s = mix64(base);
  for (auto c : counters) s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

using Rng = std::mt19937_64;

}  // namespace gpgm
