#pragma once

#include <cstdint>

namespace acoelab::rng {

/// SplitMix64 finalizer; a full-period bijection on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream key for a replication (or path) derived from the user seed.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed ^ (0xa24baed4963ee407ULL * (index + 1)));
}

/// Counter-based draw: stateless, so any (stream, counter) pair can be
/// regenerated independently of evaluation order.
inline std::uint64_t draw(std::uint64_t stream, std::uint64_t counter) noexcept {
    return splitmix64(stream + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

/// Maps a 64-bit word to [0, 1) with 53 random bits.
inline double unit_double(std::uint64_t r) noexcept {
    return static_cast<double>(r >> 11) * 0x1.0p-53;
}

} // namespace acoelab::rng
