#include "freqgate/lattice.hpp"

#include <stdexcept>
#include <string>

namespace freqgate {

ModeLattice::ModeLattice(int mode_count, int computational_dim,
                         std::optional<int> window_offset, double spacing)
    : mode_count_(mode_count),
      dim_(computational_dim),
      offset_(window_offset.value_or(centered_offset(mode_count, computational_dim))),
      spacing_(spacing) {
  if (dim_ < 1) throw std::invalid_argument("lattice: computational dimension must be >= 1");
  if (mode_count_ < 2 * dim_ || mode_count_ % 2 != 0) {
    throw std::invalid_argument("lattice: mode count " + std::to_string(mode_count_) +
                                " must be even and >= 2d = " + std::to_string(2 * dim_));
  }
  if (offset_ < 0 || offset_ + dim_ > mode_count_) {
    throw std::invalid_argument("lattice: window [" + std::to_string(offset_) + ", " +
                                std::to_string(offset_ + dim_) + ") outside 0.." +
                                std::to_string(mode_count_));
  }
  if (!(spacing_ > 0.0)) throw std::invalid_argument("lattice: spacing must be positive");
}

ModeLattice ModeLattice::with_offset(int offset) const {
  return ModeLattice(mode_count_, dim_, offset, spacing_);
}

ModeLattice ModeLattice::resized(int mode_count) const {
  const int shift = offset_ - centered_offset(mode_count_, dim_);
  return ModeLattice(mode_count, dim_, centered_offset(mode_count, dim_) + shift, spacing_);
}

}  // namespace freqgate
