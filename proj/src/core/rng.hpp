#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace purechain {

// splitmix64 finalizer over (seed, stream); decorrelates per-iteration engines
// derived from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// First `count` link-fidelity draws of iteration `iteration`. Each iteration
// owns one stream, so a longer chain consumes the same leading draws plus new
// ones, never different ones.
inline std::vector<double> draw_fidelities(std::uint64_t master_seed, int iteration,
                                           std::size_t count, double lo, double hi) {
    std::mt19937_64 engine(mix_seed(master_seed, static_cast<std::uint64_t>(iteration)));
    std::uniform_real_distribution<double> uniform(lo, hi);
    std::vector<double> out(count);
    for (double& f : out) f = uniform(engine);
    return out;
}

}  // namespace purechain
