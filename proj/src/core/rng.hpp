#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lgcorr {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit FNV-1a over raw bytes; used to hash grid-point labels so that
// derived seeds do not depend on std::hash or platform details.
std::uint64_t fnv1a64(std::string_view bytes);

// Per-trial seed from (master seed, grid-point hash, trial index). Collisions
// across (point, trial) pairs are as unlikely as splitmix64 collisions.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t point_hash,
                          std::uint64_t trial_index);

// Named substream of a trial seed (e.g. "graph", "landscape").
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name);

}  // namespace lgcorr
