#pragma once

// Counter-style splitmix64 generator with independent streams. A stream is
// derived from (seed, stream index) by scrambling both through the output
// mix, so distinct indices give non-overlapping sequences for Monte Carlo
// workers and optimizer restarts. Identical (seed, stream) pairs reproduce
// identical draws on every platform.

#include <cmath>
#include <cstdint>

namespace bb84eve {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x6A09E667F3BCC909ULL))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Multiply-shift with rejection below 2^64 mod n keeps
  // the result exactly uniform.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
      if (static_cast<std::uint64_t>(m) >= threshold)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

  bool next_bool() { return (next() >> 63) != 0; }

  // Standard normal via Box-Muller. No caching: draws stay a pure function
  // of the counter, at the cost of one discarded variate.
  double gaussian() {
    double u1 = next_double();
    const double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace bb84eve
