#pragma once

#include <cstdint>

namespace meshrepair {

// Counter-based RNG: every variate is a pure hash of (seed, stream fields),
// so results never depend on call order or thread scheduling.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Folds one more field into a stream key.
inline std::uint64_t step(std::uint64_t key, std::uint64_t v) {
  return splitmix64(key ^ (v + 0x9E3779B97F4A7C15ull + (key << 6) + (key >> 2)));
}

// Uniform double in the open interval (0,1): 53 bits, offset by half an ulp.
inline double uniform01(std::uint64_t key) {
  return ((splitmix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace meshrepair
