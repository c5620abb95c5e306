#ifndef XORCAST_RNG_HPP
#define XORCAST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace xorcast {

using Rng = std::mt19937_64;

/// splitmix64 mixing step; used to derive independent per-run seeds from
/// a master seed so sweep parallelism cannot change results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index) {
    return splitmix64(master ^ splitmix64(run_index + 1));
}

/// Uniform in [0, 1) with 53 random bits; sampling is hand-rolled so that
/// outcome sequences are identical across standard libraries.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline double exponential(Rng& rng, double mean) {
    return -mean * std::log1p(-uniform01(rng));
}

}  // namespace xorcast

#endif
