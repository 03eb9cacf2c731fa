#pragma once
#include <array>
#include <cmath>
#include <cstdint>

namespace gaplab {

// SplitMix64: counter-based, used both for seeding and as a mixer.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// Identifies a reproducible random stream. Same (seed, stream) gives a
// bit-identical sequence; distinct streams are independent by construction
// (the pair is hashed into the generator state).
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// xoshiro256** seeded from an RngStream via SplitMix64.
class Rng {
public:
    explicit Rng(RngStream s) { reseed(s); }
    Rng(std::uint64_t seed, std::uint64_t stream = 0) { reseed({seed, stream}); }

    void reseed(RngStream s) {
        SplitMix64 sm(s.seed ^ (s.stream * 0xBF58476D1CE4E5B9ULL) ^ 0x5851F42D4C957F2DULL);
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
        has_spare_ = false;
    }

    std::uint64_t u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 bits
    double u01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) {
        // rejection to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = u64(); } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return u01() < p; }

    // standard normal via Marsaglia polar method (implementation-independent,
    // unlike std::normal_distribution)
    double normal() {
        if (has_spare_) { has_spare_ = false; return spare_; }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    int rademacher() { return (u64() >> 63) ? 1 : -1; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gaplab
