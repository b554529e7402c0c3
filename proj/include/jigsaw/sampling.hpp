#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace jigsaw {

// Per-trial random stream. Reproducibility is promised for this library's own
// builds on a given standard library, not across toolchains.
using Rng = std::mt19937_64;

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed splitting rule for sweeps: fold each coordinate of the cell and the
// trial index into the master seed through mix64, in this fixed order:
//   s = mix64(master); s = mix64(s ^ n); s = mix64(s ^ k); s = mix64(s ^ mode_tag);
//   s = mix64(s ^ trial)
// Any single trial can be re-run in isolation from (master, n, k, mode, trial).
constexpr std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t n, std::uint64_t k,
                                          std::uint64_t mode_tag, std::uint64_t trial) noexcept {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ n);
    s = mix64(s ^ k);
    s = mix64(s ^ mode_tag);
    return mix64(s ^ trial);
}

// m distinct indices drawn uniformly from [0, pool_size), in draw order
// (partial Fisher-Yates). Requires m <= pool_size.
template <typename Urbg>
std::vector<std::uint32_t> draw_units(std::uint32_t pool_size, std::uint32_t m, Urbg& rng) {
    std::vector<std::uint32_t> idx(pool_size);
    std::iota(idx.begin(), idx.end(), std::uint32_t{0});
    for (std::uint32_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::uint32_t> pick(i, pool_size - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(m);
    return idx;
}

}  // namespace jigsaw
