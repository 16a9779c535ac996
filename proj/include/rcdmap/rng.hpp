#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rcdmap {

// splitmix64: cheap, well-mixed seed scrambler
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent stream seed from (base, tag, index). Used so that
// every stage of a pipeline gets its own deterministic RNG regardless of
// execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(base ^ splitmix64(h) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

} // namespace rcdmap
