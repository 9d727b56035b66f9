#pragma once

#include <cstdint>
#include <random>

namespace freqgate {

/// Independent generator for (seed, domain, index). Domains keep unrelated
/// consumers of one seed (optimizer restarts, OSA acquisitions, photon
/// counting) from sharing streams.
std::mt19937_64 derived_stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index);

namespace stream_domain {
inline constexpr std::uint64_t restart = 0;
inline constexpr std::uint64_t osa = 1;
inline constexpr std::uint64_t photon_counting = 2;
}  // namespace stream_domain

}  // namespace freqgate
