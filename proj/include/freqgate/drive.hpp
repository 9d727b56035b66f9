#pragma once

#include <span>
#include <vector>

namespace freqgate {

/// Wraps an angle into (-pi, pi].
double wrap_phase(double radians);

struct Harmonic {
  int order;         // k >= 1, multiple of the mode spacing
  double amplitude;  // beta_k, radians, >= 0
  double phase;      // theta_k, radians

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Temporal phase of an EOM as a truncated Fourier series,
///   phi(t) = sum_k beta_k sin(k * dw * t + theta_k),
/// sampled over one fundamental period T = 2 pi / dw.
///
/// Orders must be strictly increasing. Phases are wrapped into (-pi, pi] on
/// construction.
class FourierDrive {
 public:
  FourierDrive() = default;
  explicit FourierDrive(std::vector<Harmonic> harmonics);

  static FourierDrive single_tone(double amplitude, double phase, int order = 1);

  /// Harmonics 1..p from interleaved-free spans of amplitudes and phases.
  static FourierDrive from_amplitudes_phases(std::span<const double> amplitudes,
                                             std::span<const double> phases);

  const std::vector<Harmonic>& harmonics() const { return harmonics_; }
  int size() const { return static_cast<int>(harmonics_.size()); }
  int max_order() const { return harmonics_.empty() ? 0 : harmonics_.back().order; }
  bool is_zero() const;

  /// phi at t = fraction * T.
  double phase_at(double fraction) const;

  /// Throws std::invalid_argument unless 4 * max_order <= M, i.e. twice the
  /// highest harmonic stays within half the lattice.
  void check_nyquist(int mode_count) const;

  friend bool operator==(const FourierDrive&, const FourierDrive&) = default;

 private:
  std::vector<Harmonic> harmonics_;
};

/// Line-by-line pulse shaper: per-bin phase and optional attenuation.
class ShaperPattern {
 public:
  explicit ShaperPattern(std::vector<double> phases);
  ShaperPattern(std::vector<double> phases, std::vector<double> amplitudes);

  static ShaperPattern flat(int mode_count);

  int size() const { return static_cast<int>(phases_.size()); }
  const std::vector<double>& phases() const { return phases_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }

  /// True when every amplitude is exactly 1.
  bool is_phase_only() const;

  /// Pattern cyclically shifted by `shift` bins (entry j moves to j + shift).
  ShaperPattern rotated(int shift) const;

  /// Copy with all bins outside [begin, end) blocked (amplitude 0).
  ShaperPattern with_passband(int begin, int end) const;

 private:
  std::vector<double> phases_;
  std::vector<double> amplitudes_;
};

}  // namespace freqgate
