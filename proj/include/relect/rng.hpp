#pragma once

#include <cstdint>

namespace relect {

// Counter-based randomness. Every random decision in a run is a pure
// function of (trial seed, round, slot, station key), so runs are
// reproducible bit-for-bit regardless of execution order or thread count,
// and permuting station keys permutes the per-station streams exactly.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Seed for trial `index` of a batch keyed by `master_seed`.
inline constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed ^ mix64(kGolden + index));
}

// Salt shared by all stations for one probabilistic slot.
inline constexpr std::uint64_t slot_salt(std::uint64_t seed, std::uint32_t round,
                                         std::uint32_t slot) {
    return mix64(mix64(seed ^ (std::uint64_t{round} * 0xd1342543de82ef95ull)) ^
                 (std::uint64_t{slot} * 0x2545f4914f6cdd1dull));
}

// Per-station draw within a slot. `key_mul` is the station key times kGolden.
inline constexpr std::uint64_t station_draw(std::uint64_t salt, std::uint64_t key_mul) {
    return mix64(salt ^ key_mul);
}

inline constexpr double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Wake threshold for probability 2^-k as a 64-bit comparison bound.
inline constexpr std::uint64_t pow2_threshold(int k) {
    if (k <= 0) return ~0ull;
    if (k <= 63) return 1ull << (64 - k);
    if (k == 64) return 1ull;
    return 0ull;
}

}  // namespace relect
