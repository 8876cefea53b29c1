#pragma once

#include <cstdint>
#include <random>

namespace prognet {

// splitmix64; used to decorrelate derived seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed derivation: stage and stream seeds are pure functions of
// (base, tag), so parallel and serial schedules see identical streams.
inline uint64_t derive_seed(uint64_t base, uint64_t tag) {
    return splitmix64(base ^ splitmix64(tag));
}

inline std::mt19937_64 make_engine(uint64_t seed, uint64_t stream) {
    return std::mt19937_64(derive_seed(seed, stream));
}

// Uniform in [0,1) with an explicit construction; no library distribution so
// the byte stream is pinned by mt19937_64 alone.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; exact and reproducible.
inline uint64_t uniform_below(std::mt19937_64& eng, uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return v % n;
}

}  // namespace prognet
