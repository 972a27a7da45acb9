#pragma once

#include <cmath>
#include <cstdint>

namespace pf {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so trajectories are reproducible independent of execution order. The output
// is the splitmix64 finalizer applied to key + counter * golden gamma.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed + kGamma)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * kGamma);
  }

  // Uniform on (0,1]; never returns 0 so it is safe inside log().
  double uniform(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes counters 2c and 2c+1.
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  std::uint64_t key_;
};

}  // namespace pf
