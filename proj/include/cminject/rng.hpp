#pragma once

#include <cmath>
#include <cstdint>

namespace cminject {

// splitmix64 (Steele, Lea, Flood; Vigna's fixed-increment variant).
// One 64-bit word of state, full avalanche per step. Used both as the
// per-stream generator and, through derive_seed, as a counter-based
// splitter so trial i of a campaign gets the same stream no matter
// which thread runs it or in what order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Box-Muller, cosine branch only; two uniforms per deviate, no cached
  // state, so consumption per call is fixed.
  double next_gaussian(double sigma) {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_unit();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t state_;
};

// Stateless seed derivation for stream `index` of campaign `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  return z ^ (z >> 33);
}

inline SplitMix64 trial_rng(std::uint64_t master, std::uint64_t index) {
  return SplitMix64(derive_seed(master, index));
}

}  // namespace cminject
