#pragma once

#include <cstdint>
#include <random>

namespace svar {

// All randomness flows from one master seed. Each logical unit of work
// (a posterior draw, a rotation attempt) gets its own substream derived
// from (master, index), so work may run in any order with identical
// results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ index));
}

inline std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) {
    return std::mt19937_64(splitmix64(splitmix64(splitmix64(master_seed) ^ a) ^ b));
}

}  // namespace svar
