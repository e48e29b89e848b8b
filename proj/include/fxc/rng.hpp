// Copyright (c) 2026 fxc authors
// Licensed under the Apache License, Version 2.0.

#ifndef FXC_RNG_HPP
#define FXC_RNG_HPP

#include <cstdint>

namespace fxc {

/**
 * @brief Portable deterministic pseudo-random generator (xorshift64*).
 *
 * The algorithm is fixed so that seeded runs reproduce bit-for-bit on any
 * platform, independent of the standard library:
 *
 *   state ^= state >> 12; state ^= state << 25; state ^= state >> 27;
 *   output = state * 0x2545F4914F6CDD1D
 *
 * The seed is expanded through one splitmix64 step
 * (z = (seed + 0x9E3779B97F4A7C15); z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
 *  z = (z ^ z>>27) * 0x94D049BB133111EB; state = z ^ z>>31, or the golden
 * constant when that yields zero) so nearby seeds give unrelated streams.
 *
 * next_double() takes the top 53 bits -> uniform in [0, 1).
 * next_below(n) reduces next_u64() modulo n.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// In-place Fisher-Yates shuffle, high index swapped first.
    template <typename Container>
    void shuffle(Container& c) {
        for (std::size_t i = c.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            auto tmp = c[i - 1];
            c[i - 1] = c[j];
            c[j] = tmp;
        }
    }

private:
    std::uint64_t state_;
};

/// Deterministic seed derivation for independent sub-streams (splitmix64
/// over the pair). Used by grid search and the stratified splitter.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace fxc

#endif
