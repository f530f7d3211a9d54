#pragma once

#include <cmath>
#include <cstdint>

namespace tvvecm {

// Counter-derived random stream. Each stream is keyed by (seed, id...) so
// replicate i's draws depend only on the key, never on scheduling order.
// The core is the splitmix64 output function applied to an additive counter,
// which is seed-stable across platforms and compilers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ kPhi)) {}

  RngStream(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed ^ kPhi) + stream * kPhi)) {}

  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
      : state_(mix(mix(mix(seed ^ kPhi) + stream * kPhi) + substream * kGamma)) {}

  std::uint64_t next_u64() {
    state_ += kPhi;
    return mix(state_);
  }

  // Uniform on (0, 1].
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; draws are produced in pairs.
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * kPi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kGamma = 0xBF58476D1CE4E5B9ULL;
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace tvvecm
