#pragma once

#include <cstdint>
#include <random>

namespace mspad {

// splitmix64 finalizer; the basis for all derived seeds so that generation
// and protocol runs are independent of scheduling order.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) { return mix64(h ^ mix64(v)); }

template <typename... Rest>
uint64_t hash_combine(uint64_t h, uint64_t v, Rest... rest) {
    return hash_combine(hash_combine(h, v), rest...);
}

inline std::mt19937_64 seeded_rng(uint64_t seed) { return std::mt19937_64(mix64(seed)); }

}  // namespace mspad
