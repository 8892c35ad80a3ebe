#pragma once

#include <cstdint>

namespace walshcs {

// SplitMix64: state advances by 0x9E3779B97F4A7C15 and each output is the
// standard finalizer of the new state, so draw k of a stream seeded with s is
// mix(s + (k+1) * 0x9E3779B97F4A7C15). Portable across languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on {0, ..., n-1} by rejection of the biased low range.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal by Box-Muller (one value per call).
    double normal();

private:
    std::uint64_t state_;
};

}  // namespace walshcs
