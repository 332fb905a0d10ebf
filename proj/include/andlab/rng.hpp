// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace andlab {

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the draw is a pure function of
/// (seed, stream, counter), so parallel trials are order-independent.
inline std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(seed ^ mix64(stream)) ^ mix64(counter ^ 0x5851f42d4c957f2dULL));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(counter_rng(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Derives an independent sub-seed for an auxiliary stream (e.g. the
/// canopy side of a two-sided experiment).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return mix64(master ^ mix64(tag ^ 0xa0761d6478bd642fULL));
}

}  // namespace andlab
