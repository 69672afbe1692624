#pragma once

#include <cstdint>
#include <random>

namespace triphoton::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent substream, so parallel consumers of (seed, index)
/// draw identical values regardless of schedule.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL);
    return splitmix64(state);
}

inline std::mt19937_64 engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline std::uint64_t poisson(std::mt19937_64& gen, double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<long long> dist(mean);
    return static_cast<std::uint64_t>(dist(gen));
}

}  // namespace triphoton::rng
