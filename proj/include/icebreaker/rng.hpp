#ifndef ICEBREAKER_RNG_HPP
#define ICEBREAKER_RNG_HPP

#include <cstdint>
#include <vector>

#include "icebreaker/distributions.hpp"

namespace icebreaker {

/// PCG32 generator. A (seed, stream) pair selects one of 2^63 statistically
/// independent sequences; every simulation derives its replicate streams this
/// way so results do not depend on thread scheduling. Normal variates use the
/// inverse-CDF transform, which keeps streams aligned across platforms.
class Rng {
public:
    Rng(uint64_t seed, uint64_t stream) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    explicit Rng(uint64_t seed) : Rng(seed, 0u) {}

    uint32_t next_u32() {
        const uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        const uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    /// Unbiased integer in [0, bound).
    uint32_t next_below(uint32_t bound) {
        const uint32_t threshold = (-bound) % bound;
        for (;;) {
            const uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform in the open interval (0, 1), 53-bit resolution.
    double uniform() {
        const uint64_t hi = next_u32();
        const uint64_t lo = next_u32();
        const uint64_t bits = ((hi << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + uniform() * (b - a); }

    double normal() { return normal_quantile(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::vector<double> normals(std::size_t n, double mean = 0.0, double sd = 1.0) {
        std::vector<double> out(n);
        for (double& v : out) v = normal(mean, sd);
        return out;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = next_below(static_cast<uint32_t>(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_ = 0;
    uint64_t inc_ = 1;
};

/// Deterministic replicate stream: same (master_seed, stream_index) always
/// yields the same draws, distinct indices are independent.
inline Rng rng_stream(uint64_t master_seed, uint64_t stream_index) {
    return Rng(master_seed, stream_index);
}

} // namespace icebreaker

#endif
