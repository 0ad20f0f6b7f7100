#pragma once

#include <cstdint>

#include "binreg/math.hpp"

namespace binreg {

// SplitMix64. Used only to expand seeds into generator state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Collapse (seed, stream) into a single substream seed. Streams derived from
// the same seed but different ids are independent for practical purposes;
// the derivation is pure, so any parallel schedule sees the same streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    const std::uint64_t a = sm.next();
    return a ^ sm.next();
}

// xoshiro256++ with SplitMix64 state expansion. All stochastic code in the
// library draws from this generator so that results are reproducible from a
// single 64-bit seed, independently of threading.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    // Generator for substream `id` of `seed`; see mix_seed.
    static Rng stream(std::uint64_t seed, std::uint64_t id) { return Rng(mix_seed(seed, id)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1); safe as a quantile-function input.
    double uniform01_open() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal by inversion, so one uniform maps to one variate.
    double normal() { return normal_quantile(uniform01_open()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace binreg
