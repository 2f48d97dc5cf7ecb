#pragma once

#include <cmath>
#include <cstdint>

namespace anisonet {

// xoshiro256** by Blackman & Vigna (public domain reference implementation).
// Hand-rolled so that streams are bit-reproducible across compilers and
// standard libraries; std::normal_distribution et al. are implementation
// defined and would break byte-identical artifact reproduction.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        // splitmix64 seeding, as recommended by the xoshiro authors.
        uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n > 0. Rejection keeps it unbiased.
    uint64_t uniform_int(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller. No pair caching, so consumption is
    // exactly two uniforms per call regardless of call pattern.
    double gaussian() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

// Derives an independent child seed from a master seed and a stream tag,
// so the landscape, connectome, trajectories etc. never share a stream.
inline uint64_t derive_seed(uint64_t master, uint64_t stream_tag) {
    uint64_t z = master ^ (0x9e3779b97f4a7c15ull * (stream_tag + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace anisonet
