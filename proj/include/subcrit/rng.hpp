#ifndef SUBCRIT_RNG_HPP
#define SUBCRIT_RNG_HPP

#include <cstdint>
#include <random>

namespace subcrit {

using Rng = std::mt19937_64;

// splitmix64 finalizer; the standard cheap 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic stream derivation: replica streams depend only on the listed
// keys, so grids can be extended without perturbing earlier cells.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t d = 0) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ a);
    s = mix64(s ^ b);
    s = mix64(s ^ d);
    return s;
}

inline Rng make_rng(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t d = 0) {
    return Rng(derive_seed(master, a, b, d));
}

} // namespace subcrit

#endif
