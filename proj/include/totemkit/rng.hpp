// Copyright (c) 2026 totemkit contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TOTEMKIT_RNG_HPP
#define TOTEMKIT_RNG_HPP

#include <cstdint>

namespace totemkit {

/// splitmix64 finalizer; used both as a stream generator and as a counter hash.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless hash of up to three indices onto [0, 2^64); thread-count invariant
/// by construction, so per-ray jitter and per-pixel noise never depend on
/// scheduling.
inline uint64_t hash_counter(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = splitmix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

/// Map 64 random bits to a double in [0, 1).
inline double to_unit_double(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double hash_unit(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    return to_unit_double(hash_counter(seed, a, b, c));
}

}  // namespace totemkit

#endif
