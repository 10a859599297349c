#pragma once

// Portable seeded streams. std::uniform_real_distribution is implementation
// defined, so doubles are formed from the top 53 bits directly.

#include <cstdint>
#include <random>

namespace negen {

/// splitmix64 finalizer; decorrelates nearby seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  /// Stream number `index` of `seed`; streams depend only on the pair.
  Stream(std::uint64_t seed, std::uint64_t index) : rng_(splitmix64(seed ^ splitmix64(index))) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace negen
