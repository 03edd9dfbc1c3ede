#pragma once

#include <cstdint>
#include <random>

namespace annealab {

using rng_t = std::mt19937_64;

// splitmix64 output function; also used to derive independent per-run seeds
// from a master seed without constructing intermediate generators
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// k-th output of a splitmix64 stream seeded with `master`
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(master + k * 0x9e3779b97f4a7c15ULL);
}

// uniform in [0,1) with 53-bit resolution; bit-identical across platforms,
// unlike std::generate_canonical
inline double uniform01(rng_t& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(rng_t& rng) { return 2.0 * uniform01(rng) - 1.0; }

// modulo bias is ~n/2^64, far below anything observable here
inline std::uint32_t uniform_below(rng_t& rng, std::uint32_t n) {
  return static_cast<std::uint32_t>(rng() % n);
}

}  // namespace annealab
