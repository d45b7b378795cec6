#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rancn {

// Deterministic RNG used everywhere randomness is allowed. Draws are built
// explicitly from raw 64-bit engine output so identical seeds give
// bit-identical sequences on every platform and standard library, which the
// std::* distributions do not guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [lo, hi], both inclusive. Spans here are tiny
    // (chain lengths, VNF demands) so modulo bias is negligible.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Box-Muller without caching the spare value: two draws per call,
    // sequence depends only on call order.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
    }

    // Knuth's product method; fine for the desk-scale means used here.
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        int count = -1;
        do {
            prod *= uniform01();
            ++count;
        } while (prod > limit);
        return count;
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t fnv1a64(std::string_view text, std::uint64_t state = 0xcbf29ce484222325ull) {
    for (unsigned char c : text) {
        state ^= c;
        state *= 0x100000001b3ull;
    }
    return state;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seed splitting: sub-streams are derived from (base seed, stream tag) so
// adding a consumer never perturbs another stream's randomness.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stream_tag) {
    return splitmix64(base ^ fnv1a64(stream_tag));
}

}  // namespace rancn
