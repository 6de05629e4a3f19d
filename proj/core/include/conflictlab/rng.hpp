#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace conflictlab {

using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Derive an independent stream seed from a base seed and a path of tags
/// (phase id, job index, replicate index, ...). Identical inputs give
/// identical streams regardless of thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = detail::splitmix64(base);
    for (std::uint64_t tag : path) {
        s = detail::splitmix64(s ^ detail::splitmix64(tag + 0x632be59bd9b4e019ULL));
    }
    return s;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(base, path));
}

/// Stable phase tags for seed derivation.
enum class SeedPhase : std::uint64_t {
    TrainingDraws = 1,
    Replicates = 2,
    PriorFit = 3,
    JointFit = 4,
    Predictive = 5,
    BaseDraws = 6,
    LhsDesign = 7,
    Simulate = 8,
};

inline std::uint64_t tag(SeedPhase p) { return static_cast<std::uint64_t>(p); }

}  // namespace conflictlab
