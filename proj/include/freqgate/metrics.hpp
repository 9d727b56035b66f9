#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "freqgate/drive.hpp"

namespace freqgate {

/// A d x d unitary the truncated cascade should reproduce.
class GateTarget {
 public:
  /// Throws std::invalid_argument if `matrix` is not square or is not unitary
  /// to 1e-12.
  GateTarget(Eigen::MatrixXcd matrix, std::string name);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Eigen::MatrixXcd matrix_;
  std::string name_;
};

/// (1/sqrt 2) [[1, 1], [1, -1]]
GateTarget hadamard_target();

/// U[j][k] = exp(2 pi i j k / d) / sqrt(d); d >= 2.
GateTarget dft_target(int d);

/// P = Tr(V^H V) / d.
double success_probability(const Eigen::MatrixXcd& block);

/// F = |Tr(V^H U)|^2 / (P d^2). Throws DegenerateInput when V is zero.
double fidelity(const Eigen::MatrixXcd& block, const GateTarget& target);
double fidelity(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& target);

/// Lower bound (d-1)/(2d-1) on the scatter probability of a uniform d-mode
/// mixer built from one EOM.
double scatter_bound(int d);

/// 1 - scatter_bound(d) = d / (2d - 1).
double single_eom_success_ceiling(int d);

/// RF power (dBm) needed for modulation index beta on a modulator with
/// half-wave voltage v_pi into `impedance` ohms. Returns -infinity for beta = 0.
double rf_power_dbm(double beta, double v_pi, double impedance = 50.0);

/// Total drive power of all harmonics, each with its own half-wave voltage
/// (one entry per harmonic, or a single entry shared by all).
double rf_power_dbm(const FourierDrive& drive, std::span<const double> v_pi,
                    double impedance = 50.0);

}  // namespace freqgate
