#pragma once

#include <cstdint>
#include <initializer_list>

namespace lazysp {

/// SplitMix64 finalizer; mixes a base seed with stream indices so that every
/// episode owns an independent, reproducible RNG stream.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t s : stream) h = mix64(h ^ mix64(s + 0x632BE59BD9B4E019ull));
  return h;
}

}  // namespace lazysp
