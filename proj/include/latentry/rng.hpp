#pragma once

#include <cmath>
#include <cstdint>

namespace latentry {

// SplitMix64 generator. Chosen over <random> engines because its output is
// fully specified by the recurrence below, so seeded runs reproduce
// bit-identically across standard libraries and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // One standard normal via Box-Muller. Always consumes exactly two draws,
    // keeping the draw order independent of the values produced.
    double normal() {
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Index in [0, n). The modulo bias is irrelevant here; only determinism
    // matters.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    // Derives an independent-looking stream for a sub-task (e.g. one stream
    // per condition) so results do not depend on iteration order.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (salt + 1)));
        return g.next();
    }

private:
    std::uint64_t state_;
};

} // namespace latentry
