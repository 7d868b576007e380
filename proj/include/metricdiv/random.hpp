#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

#include "metricdiv/core.hpp"

namespace metricdiv {

// mt19937_64 with hand-written conversions; draws are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in {0, ..., n-1}; n > 0.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Uniform in {lo, ..., hi}.
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

  bool coin(double p = 0.5) { return uniform() < p; }

  /// Dirichlet(1, ..., 1) via normalized exponentials.
  Vector dirichlet(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = -std::log1p(-uniform());
    return v / v.sum();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace metricdiv
