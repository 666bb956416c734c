// Seeded, splittable random streams.  Every consumer derives one stream per
// logical unit of work (contig index, trial index, ...) from a root seed, so
// results are reproducible regardless of evaluation order.

#pragma once

#include <cstdint>
#include <random>

namespace markovbin {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// independent stream for (seed, stream_id); stream_id 0 is the "root" stream
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s = a ^ (stream_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(detail::splitmix64(s)),
                      static_cast<std::uint32_t>(detail::splitmix64(s))};
    return std::mt19937_64(seq);
}

// deterministic sub-seed for a labeled child component, so nested consumers
// (per-length, per-pair, ...) get disjoint stream spaces
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    std::uint64_t s = seed ^ (label * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL);
    detail::splitmix64(s);
    return detail::splitmix64(s);
}

// uniform double in [0, 1) from the top 53 bits
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// index into a probability vector by inverse-cdf scan
template <typename Vec>
int sample_index(const Vec& probs, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return n - 1;  // guard against round-off at u ~ 1
}

}  // namespace markovbin
