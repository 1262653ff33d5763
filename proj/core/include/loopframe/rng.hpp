#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace loopframe::rng {

// Mixes (seed, stream) into a single 64-bit state. Distinct streams must stay
// reproducible under any worker count, so the derivation depends only on the
// pair, never on scheduling order.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix(seed, stream));
}

// Box-Muller with the usual pair cache. Kept in-repo instead of
// std::normal_distribution so the byte stream is pinned by this file alone.
class Gaussian {
 public:
  explicit Gaussian(std::mt19937_64 engine) : engine_(engine) {}
  Gaussian(std::uint64_t seed, std::uint64_t stream)
      : engine_(make_stream(seed, stream)) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // (0,1] keeps log() finite.
    double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double uniform() {  // [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1p-53;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace loopframe::rng
