#pragma once

#include <cstdint>
#include <random>

namespace patient {

/// Per-run random stream. mt19937_64 output is fully specified by the
/// standard, so every draw below is reproducible across compilers.
using Rng = std::mt19937_64;

/// Uniform on [0, 1) with 53 bits of resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform_open_closed(Rng& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of replication `index` under `master_seed`. Depends only on the pair,
/// never on scheduling order.
constexpr std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace patient
