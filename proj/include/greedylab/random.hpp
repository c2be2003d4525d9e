#pragma once

#include <cstdint>
#include <random>

namespace greedylab {

/// Independent named streams derived from one experiment seed, so drawing
/// noise never perturbs the sample points.
enum class Stream : std::uint64_t {
  sample_points = 1,
  noise = 2,
  test_data = 3,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream))));
}

/// Uniform double on [0,1) with 53 random bits; bit-portable across
/// standard libraries, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

} // namespace greedylab
