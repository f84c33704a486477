#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "centershadow/torus.hpp"

namespace cshadow {

// mt19937_64 has a standardized output sequence; distributions do not.
// All randomness goes through these extractors so runs are reproducible
// across standard libraries.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double unit() { return double(gen() >> 11) * 0x1.0p-53; } // [0,1)

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t below(std::uint64_t n) { return gen() % n; }

  T2Point point() {
    double x = unit();
    double y = unit();
    return {x, y};
  }

  // Uniform over the disk of the given radius.
  T2Vector disk(double radius) {
    double r = radius * std::sqrt(unit());
    double a = 2.0 * std::numbers::pi * unit();
    return {r * std::cos(a), r * std::sin(a)};
  }
};

} // namespace cshadow
