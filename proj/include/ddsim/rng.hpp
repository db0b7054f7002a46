#pragma once

#include <cstdint>
#include <cmath>

namespace ddsim {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator (splitmix64). One instance per Monte-Carlo index:
// stream(seed, i) and stream(seed, j) are statistically independent for i != j,
// which makes ensemble results independent of the parallel schedule.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(mix64(seed) + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [-1, 1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

  // Standard normal via Box-Muller; always consumes exactly two uniforms.
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ddsim
