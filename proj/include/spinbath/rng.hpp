#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "spinbath/constants.hpp"

// Seeded, stream-keyed random numbers. Each logical stream (one per Monte
// Carlo trajectory or sample block) is an independently seeded generator keyed
// by (seed, stream index), so results do not depend on evaluation order or
// thread count. The Gaussian transform is pinned here rather than taken from
// std::normal_distribution, whose algorithm is implementation-defined.

namespace spinbath::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Generator for one keyed stream.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_index)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_index * 0x9e3779b97f4a7c15ULL + 1))) {}

    /// Uniform in [0, 1).
    double uniform() {
        return (engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return ((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (both values used).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * constants::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Order-insensitive compensated (Kahan) accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace spinbath::rng
