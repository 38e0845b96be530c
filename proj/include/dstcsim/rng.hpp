#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

#include "dstcsim/common.hpp"

namespace dstcsim {

// splitmix64, used only to spread user seeds into independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix64(mix64(seed) ^ mix64(salt + 0x6a09e667f3bcc909ULL));
}

// Seeded random stream. The transforms below are hand-rolled on top of the
// (standard-mandated, portable) mt19937_64 bit stream so that identical seeds
// give bitwise-identical doubles on every platform; std::*_distribution does
// not guarantee that.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derived(std::uint64_t seed, std::uint64_t salt) {
        return RngStream(derive_seed(seed, salt));
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    // ±1 with equal probability
    double bpsk_symbol() { return (engine_() >> 63) ? 1.0 : -1.0; }

    // standard normal, Box-Muller; one draw of the pair is cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // zero-mean complex Gaussian with E|z|^2 = variance
    Complex complex_gaussian(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = s * gaussian();
        const double im = s * gaussian();
        return {re, im};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dstcsim
