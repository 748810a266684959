#pragma once

#include <cmath>
#include <cstdint>

#include "famiter/vecspace.hpp"

namespace famiter {

/// Small self-contained generator so that seeded sampling is reproducible
/// across standard libraries (std distributions are implementation-defined).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1).
    double u01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        double u = u01();
        double v = u01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
    }

private:
    std::uint64_t state_;
};

/// Mixes a base seed with a stream index, for per-index reseeding.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return g.next();
}

/// Uniform sample from the closed L2 ball of the given radius.
inline Vector sample_in_ball(SplitMix64& rng, int d, double radius) {
    Vector v(static_cast<std::size_t>(d));
    double s = 0.0;
    for (auto& c : v) {
        c = rng.gaussian();
        s += c * c;
    }
    double n = std::sqrt(s);
    if (n == 0.0) return Vector(static_cast<std::size_t>(d), 0.0);
    double r = radius * std::pow(rng.u01(), 1.0 / d);
    for (auto& c : v) c *= r / n;
    return v;
}

}  // namespace famiter
