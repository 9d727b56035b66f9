#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/metrics.hpp"
#include "freqgate/transfer.hpp"

namespace freqgate::lab {

/// Input field on the computational window: x_n = sqrt(p_n) exp(i phi_n).
class ProbeState {
 public:
  /// Throws std::invalid_argument if every entry is zero.
  explicit ProbeState(Eigen::VectorXcd amplitudes);

  static ProbeState single_mode(int dim, int mode, double power = 1.0);
  /// Equal power `power` in modes 0 and n, mode n carrying exp(i phi).
  static ProbeState pair(int dim, int n, double phi, double power = 1.0);
  /// x_n = sqrt(power / d) exp(-i n phi), the weak-coherent scan input.
  static ProbeState superposition(int dim, double phi, double power = 1.0);

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  double total_power() const { return amplitudes_.squaredNorm(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Per-bin powers over the full lattice from one OSA acquisition.
struct Spectrum {
  std::vector<double> powers;
  std::uint64_t acquisition = 0;

  double total() const;
};

/// Hidden transfer matrix behind a lossy, noisy square-law detector.
class VirtualApparatus {
 public:
  /// `insertion_loss` is the transmissivity eta in (0, 1]; the OSA noise is a
  /// relative per-bin sigma in [0, 0.1).
  VirtualApparatus(TransferMatrix truth, double insertion_loss = 1.0, double osa_noise_sigma = 0.0,
                   std::uint64_t seed = 0);

  const TransferMatrix& truth() const { return truth_; }
  const ModeLattice& lattice() const { return truth_.lattice(); }
  double insertion_loss() const { return eta_; }
  double osa_noise_sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }

  /// Noiseless field over all M bins, including the insertion loss.
  Eigen::VectorXcd output_field(const ProbeState& probe) const;

 private:
  TransferMatrix truth_;
  double eta_;
  double sigma_;
  std::uint64_t seed_;
};

/// eta |V x|^2 (1 + eps) per bin; eps is Gaussian, truncated at 5 sigma,
/// drawn from the stream for (seed, acquisition).
Spectrum measure_spectrum(const VirtualApparatus& app, const ProbeState& probe,
                          std::uint64_t acquisition = 0);

/// r_mn = sqrt(power in m under probe n / total power under probe n), d x d
/// over the window of `lattice`. Throws DegenerateInput for a dark spectrum.
Eigen::MatrixXd reconstruct_amplitudes(std::span<const Spectrum> spectra, const ModeLattice& lattice);

/// Uniform phase scan phi_k = 2 pi k / K; `values` is K x M.
struct FringeTrace {
  std::vector<double> phi;
  Eigen::MatrixXd values;
  int pair = 0;
};

/// Probes [sqrt p, 0, ..., sqrt p e^{i phi_k}, ..., 0] at inputs (0, n).
/// Acquisitions first_acquisition .. first_acquisition + K - 1 are used.
FringeTrace phase_scan(const VirtualApparatus& app, int n, int samples,
                       std::uint64_t first_acquisition = 0, double power = 1.0);

struct FringeFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Discrete-Fourier extraction of harmonic n from uniform samples over
/// [0, 2 pi). Phase is 0 when amplitude < 1e-12 |offset|.
FringeFit fit_fringe(std::span<const double> samples, int harmonic);

/// Gauge: first row and first column real and nonnegative.
struct ReconstructedMultiport {
  Eigen::MatrixXcd entries;
  Eigen::MatrixXd moduli;
  Eigen::MatrixXd phases;
  double fidelity = 0.0;
  double success_probability = 0.0;
};

/// d single-mode probes, then d - 1 scans of pairs (0, n) with K samples each.
ReconstructedMultiport reconstruct(const VirtualApparatus& app, const GateTarget& target, int samples = 16);

/// Moves V into the reconstruction gauge: phases of V_mn - V_m0 - V_0n + V_00.
Eigen::MatrixXcd gauge_fixed(const Eigen::MatrixXcd& v);

}  // namespace freqgate::lab
