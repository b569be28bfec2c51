#pragma once

#include <cstdint>
#include <vector>

namespace kgqa {

// SplitMix64. Used everywhere randomness is needed so that seeded runs are
// bit-reproducible across platforms and standard libraries.
struct SplitMix64 {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool coin() { return (next() & 1u) != 0; }
};

// Fisher-Yates with SplitMix64, deterministic for a given seed.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace kgqa
