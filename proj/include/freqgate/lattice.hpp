#pragma once

#include <numbers>
#include <optional>

namespace freqgate {

/// Discretized frequency-bin space: M bins spaced by `spacing` (rad/s), with a
/// d-mode computational window starting at lattice index `window_offset`.
///
/// All arithmetic is index based; the spacing is carried only for reports and
/// RF conversions. M must be even and at least 2d. When no offset is given the
/// window is centered at M/2 so that sidebands stay clear of the circulant
/// wrap-around.
class ModeLattice {
 public:
  static constexpr double kDefaultSpacing = 2.0 * std::numbers::pi * 25e9;

  ModeLattice(int mode_count, int computational_dim,
              std::optional<int> window_offset = std::nullopt,
              double spacing = kDefaultSpacing);

  static int centered_offset(int mode_count, int computational_dim) {
    return (mode_count - computational_dim) / 2;
  }

  int mode_count() const { return mode_count_; }
  int dim() const { return dim_; }
  int window_offset() const { return offset_; }
  int window_end() const { return offset_ + dim_; }
  double spacing() const { return spacing_; }

  ModeLattice with_offset(int offset) const;

  /// Same window geometry on a lattice of a different size, re-centered.
  ModeLattice resized(int mode_count) const;

  friend bool operator==(const ModeLattice&, const ModeLattice&) = default;

 private:
  int mode_count_;
  int dim_;
  int offset_;
  double spacing_;
};

}  // namespace freqgate
