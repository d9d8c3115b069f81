#ifndef PINEWTON_RNG_HPP
#define PINEWTON_RNG_HPP

#include <cstdint>
#include <random>

// Deterministic random numbers.  Every consumer owns an mt19937_64 and
// draws through uniform() below, which is bit-reproducible across
// platforms (std::uniform_real_distribution is not pinned by the
// standard).  Independent substreams come from splitmix-style mixing of
// (seed, index), so sample k of a run is the same no matter how many
// samples are drawn or on how many threads.

namespace pinewton {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// uniform in [0, 1)
inline double uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform(gen);
}

}  // namespace pinewton

#endif
