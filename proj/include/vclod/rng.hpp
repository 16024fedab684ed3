#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vclod/normal.hpp"

namespace vclod {

// All randomness flows through mt19937_64 plus hand-specified
// transforms. The engine's output sequence is fixed by the standard,
// so seeded runs are byte-reproducible across platforms; the library
// never uses std::*_distribution, whose streams are not.
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
} // namespace detail

inline Rng make_rng(std::uint64_t seed) { return Rng(detail::splitmix64(seed)); }

// Decorrelated stream for (seed, stream_id); used to hand every
// participant / trial its own generator.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(detail::splitmix64(seed ^ detail::splitmix64(stream_id + 0x6A09E667F3BCC909ull)));
}

// Uniform double strictly inside (0, 1): 53-bit mantissa, offset by
// half a step so 0 and 1 are unreachable.
inline double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

// Gaussian draw by inverse-CDF transform; exact given the quantile
// contract, and unlike std::normal_distribution has one fixed stream.
inline double normal_sample(Rng& rng) { return normal_quantile(uniform01(rng)); }

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace vclod
