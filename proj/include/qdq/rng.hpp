#pragma once

#include <cstdint>
#include <random>

namespace qdq {

/// Seed used whenever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 1234567890;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * Reproducible generator: std::mt19937_64, whose output sequence is fixed by
 * the standard, plus a portable [0,1) mapping from the top 53 bits.
 *
 * Stream splitting: substream i of seed s is seeded with
 * splitmix64(s ^ splitmix64(i)). Per-shot and per-trial draws use their own
 * substream, so results do not depend on how work is batched.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(seed ^ splitmix64(index))); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace qdq
