#include "freqgate/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace freqgate {

double wrap_phase(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(radians, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

FourierDrive::FourierDrive(std::vector<Harmonic> harmonics) : harmonics_(std::move(harmonics)) {
  int previous = 0;
  for (auto& h : harmonics_) {
    if (h.order <= previous) {
      throw std::invalid_argument("drive: harmonic orders must be positive and strictly increasing");
    }
    if (!(h.amplitude >= 0.0) || !std::isfinite(h.amplitude)) {
      throw std::invalid_argument("drive: harmonic amplitude must be finite and >= 0");
    }
    if (!std::isfinite(h.phase)) throw std::invalid_argument("drive: harmonic phase must be finite");
    h.phase = wrap_phase(h.phase);
    previous = h.order;
  }
}

FourierDrive FourierDrive::single_tone(double amplitude, double phase, int order) {
  return FourierDrive({Harmonic{order, amplitude, phase}});
}

FourierDrive FourierDrive::from_amplitudes_phases(std::span<const double> amplitudes,
                                                  std::span<const double> phases) {
  if (amplitudes.size() != phases.size()) {
    throw std::invalid_argument("drive: amplitude and phase counts differ");
  }
  std::vector<Harmonic> hs;
  hs.reserve(amplitudes.size());
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    hs.push_back({static_cast<int>(k) + 1, amplitudes[k], phases[k]});
  }
  return FourierDrive(std::move(hs));
}

bool FourierDrive::is_zero() const {
  return std::all_of(harmonics_.begin(), harmonics_.end(),
                     [](const Harmonic& h) { return h.amplitude == 0.0; });
}

double FourierDrive::phase_at(double fraction) const {
  double phi = 0.0;
  for (const auto& h : harmonics_) {
    phi += h.amplitude * std::sin(2.0 * std::numbers::pi * h.order * fraction + h.phase);
  }
  return phi;
}

void FourierDrive::check_nyquist(int mode_count) const {
  if (4 * max_order() > mode_count) {
    throw std::invalid_argument("drive: harmonic order " + std::to_string(max_order()) +
                                " violates the Nyquist margin for M = " +
                                std::to_string(mode_count));
  }
}

ShaperPattern::ShaperPattern(std::vector<double> phases)
    : ShaperPattern(phases, std::vector<double>(phases.size(), 1.0)) {}

ShaperPattern::ShaperPattern(std::vector<double> phases, std::vector<double> amplitudes)
    : phases_(std::move(phases)), amplitudes_(std::move(amplitudes)) {
  if (phases_.size() != amplitudes_.size()) {
    throw std::invalid_argument("shaper: phase and amplitude lengths differ");
  }
  for (double& p : phases_) {
    if (!std::isfinite(p)) throw std::invalid_argument("shaper: non-finite phase");
    p = wrap_phase(p);
  }
  for (double a : amplitudes_) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("shaper: amplitude outside [0, 1]");
  }
}

ShaperPattern ShaperPattern::flat(int mode_count) {
  return ShaperPattern(std::vector<double>(static_cast<std::size_t>(mode_count), 0.0));
}

bool ShaperPattern::is_phase_only() const {
  return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](double a) { return a == 1.0; });
}

ShaperPattern ShaperPattern::rotated(int shift) const {
  const int n = size();
  std::vector<double> ph(phases_.size()), am(amplitudes_.size());
  for (int j = 0; j < n; ++j) {
    const int dst = ((j + shift) % n + n) % n;
    ph[dst] = phases_[j];
    am[dst] = amplitudes_[j];
  }
  return ShaperPattern(std::move(ph), std::move(am));
}

ShaperPattern ShaperPattern::with_passband(int begin, int end) const {
  std::vector<double> am = amplitudes_;
  for (int j = 0; j < size(); ++j) {
    if (j < begin || j >= end) am[j] = 0.0;
  }
  return ShaperPattern(phases_, std::move(am));
}

}  // namespace freqgate
