#pragma once

#include <cstdint>

namespace edfcap {

/// splitmix64: tiny counter-friendly generator with full 64-bit state.
/// Used everywhere randomness must be bit-identical across platforms and
/// standard libraries (std distributions are implementation-defined).
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

/// Stateless mix of two words; seeds independent sub-streams.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s{a ^ (0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2))};
    s.next();
    return s.next() ^ b;
}

/// Top 53 bits -> double in [0, 1).
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi) from one 64-bit word.
inline double uniform_in(std::uint64_t bits, double lo, double hi) {
    return lo + (hi - lo) * unit_double(bits);
}

} // namespace edfcap
