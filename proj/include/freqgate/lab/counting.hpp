#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/lab/apparatus.hpp"

namespace freqgate::lab {

struct Detector {
  double efficiency = 0.2;
  double gate_rate_hz = 1.25e6;
  double gate_duration_s = 1e-9;
  double dark_rate_hz = 20.0;

  void validate() const;
};

struct CountingSettings {
  double mean_photons = 0.1;  // per gate, at the gate input
  Detector detector;
  double dwell_s = 5.0;
  int repeats = 5;
  int samples = 20;  // phase points over [0, 2 pi)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rates are counts per second after subtracting the mean measured dark rate.
/// Rows are phase points, columns the d window modes.
struct CountingScan {
  std::vector<double> phi;
  std::vector<Eigen::MatrixXd> raw_counts;  // one K x d matrix per repeat
  std::vector<double> dark_counts;          // one laser-off dwell per repeat
  double dark_rate_subtracted = 0.0;
  double dwell_s = 0.0;
  Eigen::MatrixXd mean_rate;
  Eigen::MatrixXd std_rate;
  Eigen::MatrixXd expected_rate;  // noiseless detection rate, dark counts included

  /// Dark-subtracted rate trace of one mode, averaged over repeats.
  std::vector<double> mode_trace(int mode) const;
};

/// Weak-coherent superposition scan (x_n = exp(-i n phi) / sqrt d) with
/// gated Poisson counting on each window mode.
CountingScan photon_counting_scan(const VirtualApparatus& app, const CountingSettings& settings);

/// Fits sum_{n < harmonics} A_n cos(n phi + B_n) and returns (max - min) / (max + min)
/// of the fit on a fine grid, clamped to [0, 1].
double visibility(std::span<const double> trace, int harmonics);

}  // namespace freqgate::lab
