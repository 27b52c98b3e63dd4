#pragma once

#include <cstdint>
#include <random>

namespace drinv {

using Rng = std::mt19937_64;

// Independent named streams from one experiment seed, so e.g. the demand
// sequence does not depend on how many exploration draws were made.
enum class Stream : std::uint64_t { init = 0, demand = 1, explore = 2, replay = 3, delay = 4, catalog = 5 };

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5eedu};
  return Rng(seq);
}

}  // namespace drinv
