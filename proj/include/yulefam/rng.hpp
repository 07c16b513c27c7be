#pragma once

// Deterministic random number core: a xoshiro256++ engine seeded through
// SplitMix64, plus the variate transforms used throughout the library.
// Replicate i of an experiment runs on its own stream derived as
// mix64(master_seed, i), so serial and parallel execution produce identical
// per-replicate results.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace yulefam {

// SplitMix64 finalizer (Vigna). Bijective on 64-bit words.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for substream `i` of `master`.
inline constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t i) noexcept {
    return splitmix64(master ^ splitmix64(i + 0x632be59bd9b4e019ULL));
}

// xoshiro256++ (Blackman & Vigna, public domain reference implementation).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            x = splitmix64(x);
            w = x;
        }
    }

    std::uint64_t next_u64() noexcept {
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

    // Uniform on [0,1), 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1); safe as an argument to log/pow.
    double uniform_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer on {0, ..., n-1} via 128-bit multiply-high.
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    double exponential() noexcept { return -std::log(uniform_open()); }

    // Beta(1, b) by inverse CDF: W = 1 - U^{1/b}. Exact and branch-free.
    double beta_1_b(double b) noexcept { return 1.0 - std::pow(uniform_open(), 1.0 / b); }

    double normal() noexcept {
        // Marsaglia polar method; second variate is discarded to keep the
        // draw count per call fixed at "until acceptance".
        for (;;) {
            const double u = 2.0 * uniform_open() - 1.0;
            const double v = 2.0 * uniform_open() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 boosted through
    // Gamma(shape+1) * U^{1/shape}.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_open(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace yulefam
