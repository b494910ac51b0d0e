#pragma once

#include <array>
#include <cstdint>

namespace addfunc::rng {

// Counter-based generation: every random quantity is a pure function of
// (seed, stream, replication, index), so results do not depend on the order
// or thread in which they are drawn.

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Stream tags keep the draws of different consumers disjoint.
enum class Stream : std::uint32_t {
    observation = 1,   // y = theta + xi
    duplication = 2,   // z in the sample-duplication trick
    placement = 3,     // random support placement
    prior = 4,         // prior sampling in lower-bound validation
    generic = 5,
};

/// Two independent standard normals (Box-Muller on one Philox block).
std::array<double, 2> normal_pair(std::uint64_t seed, Stream stream, std::uint64_t rep,
                                  std::uint64_t index);

/// Uniform in [0, 1) with 53 random bits.
double uniform(std::uint64_t seed, Stream stream, std::uint64_t rep, std::uint64_t index);

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for replication `rep` of a run seeded with `seed`.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t rep) {
    return mix64(seed ^ mix64(rep + 0x9E3779B97F4A7C15ULL));
}

}  // namespace addfunc::rng
