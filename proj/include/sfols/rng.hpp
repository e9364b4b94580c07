#pragma once

#include <cstdint>
#include <random>

#include "sfols/types.hpp"

namespace sfols {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Seeded random stream. All draws go through explicit conversions of the
 * raw engine output so results do not depend on the standard library's
 * distribution implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : eng_(mix64(seed ^ mix64(stream))) {}

    // Uniform double in [0, 1).
    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in {0, ..., n-1}; n must be positive.
    int uniform_int(int n) {
        // rejection sampling keeps the draw exactly uniform
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Flat Dirichlet draw: normalized i.i.d. Exp(1) variates.
    Vector dirichlet_flat(int d) {
        Vector g(d);
        double total = 0.0;
        for (int i = 0; i < d; ++i) {
            double u = uniform01();
            g[i] = -std::log(1.0 - u);
            total += g[i];
        }
        return g / total;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace sfols
