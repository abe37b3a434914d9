// Seeded random streams with platform-independent output.
//
// std::mt19937_64 produces a standardized bit sequence, but the standard
// <random> distributions are implementation-defined. All draws here go
// through hand-rolled conversions so that a given seed yields bit-identical
// results on every platform and standard library.

#pragma once

#include <cstdint>
#include <random>

namespace evcsp {

// Mixing finalizer from the splitmix64 generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seed for trial `index` of a batch keyed by `master`. Stable: the value for
// a given (master, index) never depends on how many trials are requested.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

// Uniform draws on top of a raw 64-bit engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace evcsp
