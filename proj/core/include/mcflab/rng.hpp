#pragma once

#include <cstdint>
#include <random>

namespace mcflab {

// Deterministic RNG. Variates are derived from the raw engine output with
// fixed arithmetic (no std::*_distribution, whose streams differ between
// standard library implementations), so identical seeds give identical
// bytes in every output file.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // in [0, n)
    return static_cast<int>(uniform() * n) % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mcflab
