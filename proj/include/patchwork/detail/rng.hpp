#ifndef PATCHWORK_DETAIL_RNG_HPP_
#define PATCHWORK_DETAIL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace patchwork::detail {

/// Deterministic generator used for every randomized step in the library.
/// Distributions are implemented by hand so the same seed yields the same
/// stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  // splitmix64
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Standard normal via Box-Muller (one value per call, no cached state).
  double gaussian() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Normal(0, sigma) truncated to [-3 sigma, 3 sigma].
  double clamped_gaussian(double sigma) {
    if (sigma == 0.0) return 0.0;
    double g = gaussian() * sigma;
    if (g > 3.0 * sigma) g = 3.0 * sigma;
    if (g < -3.0 * sigma) g = -3.0 * sigma;
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace patchwork::detail

#endif  // PATCHWORK_DETAIL_RNG_HPP_
