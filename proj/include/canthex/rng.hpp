#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace canthex {

// Deterministic Gaussian source. Box-Muller on top of mt19937_64 rather than
// std::normal_distribution, whose output sequence differs between standard
// library implementations; logs must be reproducible byte for byte.
class GaussianRng {
 public:
  explicit GaussianRng(uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53-bit mantissa uniform in [0, 1).
    return (engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double normal(double sigma) {
    if (sigma <= 0.0) return 0.0;
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * sigma;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta) * sigma;
  }

  // Derives an independent stream for campaign grid point `index`.
  static uint64_t derive_seed(uint64_t base, uint64_t index) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace canthex
