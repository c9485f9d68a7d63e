#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ps12/geometry.hpp"

namespace ps12 {

/// Deterministic random source.  Doubles are produced by an explicit
/// 53-bit conversion so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard exponential via inversion; argument of log stays in (0,1].
    double exponential() { return -std::log(1.0 - uniform()); }

    /// Uniform point in the triangle (a,b,c).
    Point2 in_triangle(Point2 a, Point2 b, Point2 c) {
        double u = uniform(), v = uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        return a + u * (b - a) + v * (c - a);
    }

    /// Uniform barycentric triple (Dirichlet(1,1,1)).
    Bary3 bary() {
        const double e1 = exponential(), e2 = exponential(), e3 = exponential();
        return {e1, e2, e3};
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace ps12
