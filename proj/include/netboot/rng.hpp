#pragma once

#include <cstdint>
#include <random>

namespace netboot {

using Rng = std::mt19937_64;

/// Purposes that get their own family of substreams under one root seed.
enum class StreamTag : std::uint64_t {
  block_resample = 1,
  dwb_weights = 2,
  network = 3,
  innovations = 4,
  coverage_rep = 5,
};

/// Independent generator for (root seed, purpose, index). Replicate b of a
/// bootstrap run always draws from substream(seed, tag, b), so output does
/// not depend on how replicates are scheduled across threads.
inline Rng substream(std::uint64_t root_seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed),
                    static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

/// Derives a 64-bit child seed, used where a whole run (e.g. one Monte Carlo
/// repetition) needs its own root.
inline std::uint64_t derive_seed(std::uint64_t root_seed, StreamTag tag, std::uint64_t index) {
  Rng gen = substream(root_seed, tag, index);
  return gen();
}

}  // namespace netboot
