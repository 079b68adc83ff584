#pragma once

#include <cstdint>
#include <string_view>

namespace saccadelab {

/// Deterministic random stream (splitmix64). The standard-library engines
/// are portable but the distributions are not; everything here is pinned
/// bit-for-bit so the same seed reproduces the same run on any platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 bits of entropy.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection to avoid modulo bias.
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

private:
    std::uint64_t state_;
};

/// FNV-1a hash of an identifier, for deriving per-trial streams.
inline std::uint64_t hash_identifier(std::string_view id) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

/// Stream for one trial, independent of the order trials are scheduled in.
inline RngStream trial_stream(std::uint64_t seed, std::string_view trial_id) {
    RngStream mix(seed ^ hash_identifier(trial_id));
    return RngStream(mix.next_u64());
}

} // namespace saccadelab
