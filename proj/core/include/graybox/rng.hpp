#pragma once

// Deterministic random number utilities.
//
// The standard <random> distributions are implementation-defined, so all
// randomness funnels through this header to keep run results bit-identical
// across standard libraries. Rng is a sequential generator for optimizer
// decisions; keyed_u64/keyed_real implement a small counter-based PRF used
// where a value must be a pure function of (seed, counter) rather than of a
// draw sequence (e.g. noise coefficients).

#include <cstdint>
#include <vector>

namespace graybox {

// SplitMix64 finalizer; good avalanche, the usual constants.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based PRF: a pure function of (key, counter).
inline uint64_t keyed_u64(uint64_t key, uint64_t counter) {
    return mix64(mix64(key) ^ mix64(counter * 0xD6E8FEB86659FD93ull + 0xA5A5A5A5A5A5A5A5ull));
}

// Uniform in [0,1) with 53-bit resolution.
inline double u64_to_real(uint64_t v) { return static_cast<double>(v >> 11) * 0x1.0p-53; }

inline double keyed_real(uint64_t key, uint64_t counter) { return u64_to_real(keyed_u64(key, counter)); }

// Sequential generator (xoshiro-free: SplitMix64 stream is plenty here).
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound); bound > 0. Lemire's multiply-shift with
    // rejection keeps this exactly uniform and platform-independent.
    uint64_t below(uint64_t bound) {
        while (true) {
            uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            uint64_t lo = static_cast<uint64_t>(m);
            if (lo >= bound || lo >= (uint64_t{0} - bound) % bound) return static_cast<uint64_t>(m >> 64);
        }
    }

    int below_int(int bound) { return static_cast<int>(below(static_cast<uint64_t>(bound))); }

    double real01() { return u64_to_real(next_u64()); }

    // Uniform in [lo, hi).
    double real(double lo, double hi) { return lo + (hi - lo) * real01(); }

    bool coin() { return (next_u64() >> 63) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // A derived, statistically independent stream (for sub-components).
    Rng fork(uint64_t salt) { return Rng(mix64(next_u64() ^ mix64(salt))); }

private:
    uint64_t state_;
};

}  // namespace graybox
