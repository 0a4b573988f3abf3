#pragma once

#include <cmath>
#include <cstdint>

#include "polfocus/types.hpp"

namespace polfocus::rng {

/// Tiny deterministic generator (splitmix64) with explicit Box-Muller normals.
/// <random> engines would do, but the standard leaves distribution algorithms
/// implementation-defined; seeded draws here must match across toolchains.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via the basic Box-Muller transform (pair cached).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform direction on the unit sphere (z uniform in [-1,1], azimuth uniform).
    Vec3 next_unit_vector() {
        const double z = next_in(-1.0, 1.0);
        const double phi = next_in(0.0, 2.0 * M_PI);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace polfocus::rng
