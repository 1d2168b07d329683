#ifndef CIRCLELAB_PRNG_HPP
#define CIRCLELAB_PRNG_HPP

#include <cstdint>

namespace circlelab {

// Splitmix64. Same seed gives the same stream on every platform; this is the
// reproducibility contract for all seeded experiments.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 random bits
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi] via rejection-free scaling (bias < 2^-64)
    std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
        unsigned __int128 span = (unsigned __int128)(hi - lo) + 1;
        return lo + std::uint64_t(((unsigned __int128)next() * span) >> 64);
    }

private:
    std::uint64_t state_;
};

}

#endif
