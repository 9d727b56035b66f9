#include "freqgate/rng.hpp"

namespace freqgate {

std::mt19937_64 derived_stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(domain), hi(domain), lo(index), hi(index)};
  return std::mt19937_64(seq);
}

}  // namespace freqgate
