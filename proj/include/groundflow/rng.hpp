#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace groundflow {

/// SplitMix64 finaliser (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: draw k of stream s under seed is
/// splitmix64(key(seed, s) + k * golden), where key hashes the seed and the
/// stream id. Streams are independent of evaluation order, so results do not
/// depend on worker count or platform. Distributions are implemented here
/// rather than via <random> because the standard distributions are not
/// specified bit-exactly across library implementations.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

    /// Stream id for a (kind, a, b) triple, e.g. (motion, agent, frame).
    static constexpr std::uint64_t stream_id(std::uint64_t kind, std::uint64_t a, std::uint64_t b = 0) {
        return splitmix64(splitmix64(kind * 0x100000001B3ULL ^ a) + b);
    }

    constexpr std::uint64_t next_u64() { return splitmix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (consumes two draws).
    double normal() {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Poisson by Knuth multiplication; intended for small rates.
    int poisson(double rate) {
        if (rate <= 0.0) return 0;
        const double limit = std::exp(-rate);
        int k = 0;
        double p = uniform();
        while (p > limit) {
            ++k;
            p *= uniform();
        }
        return k;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace groundflow
