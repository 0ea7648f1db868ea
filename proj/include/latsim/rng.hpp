#pragma once

#include <cstdint>
#include <random>

namespace latsim {

// splitmix64 finalizer. Used for deriving independent sub-seeds from a
// master seed; every stream in the project goes through here so that no
// component depends on a hidden global RNG.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Sub-seed i of a master seed: splitmix64 applied to master xor a
// stream-indexed odd constant.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace latsim
