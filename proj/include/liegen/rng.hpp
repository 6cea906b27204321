#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace liegen {

/// Seeded generator with hand-rolled distributions. std::mt19937_64 is
/// specified bit-exactly by the standard, but the distribution adapters are
/// not; doing the mapping here keeps sampled values identical across
/// standard libraries, which the determinism guarantees rely on.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller. No caching of the second deviate, so
    /// the draw count per call is fixed.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Uniform integer in [lo, hi] by rejection-free scaling (bias below
    /// 2^-53 is acceptable for candidate selection).
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace liegen
