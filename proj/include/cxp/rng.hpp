#pragma once

#include <cstdint>
#include <random>

namespace cxp {

// splitmix64 finalizer, used to decorrelate seed/stream pairs.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent engine for (seed, stream). Every randomized component keys
/// its draws on an explicit stream id so that reruns are reproducible and
/// parallel runs cannot interleave draws.
inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix64(mix64(seed) ^ stream));
}

} // namespace cxp
