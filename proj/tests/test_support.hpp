// Shared helpers for the test suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "spraylab/geometry.hpp"

namespace testutil {

// Deterministic uniform doubles from a fixed-width engine; identical
// sequences on every platform.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform(double a, double b) {
        const uint64_t bits = eng_();
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }

    int index(int n) { return static_cast<int>(eng_() % static_cast<uint64_t>(n)); }

  private:
    std::mt19937_64 eng_;
};

inline spraylab::Vec2 random_point_in_disc(Rng& rng, spraylab::Vec2 center, double radius) {
    for (;;) {
        const double x = rng.uniform(-radius, radius);
        const double y = rng.uniform(-radius, radius);
        if (x * x + y * y <= radius * radius) return {center.x + x, center.y + y};
    }
}

}  // namespace testutil
