#include "freqgate/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "freqgate/errors.hpp"
#include "freqgate/transfer.hpp"

namespace freqgate {

GateTarget::GateTarget(Eigen::MatrixXcd matrix, std::string name)
    : matrix_(std::move(matrix)), name_(std::move(name)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw std::invalid_argument("gate target: matrix must be square and non-empty");
  }
  if (unitarity_defect(matrix_) > 1e-12) {
    throw std::invalid_argument("gate target '" + name_ + "' is not unitary to 1e-12");
  }
}

GateTarget hadamard_target() {
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd h(2, 2);
  h << s, s, s, -s;
  return GateTarget(std::move(h), "hadamard");
}

GateTarget dft_target(int d) {
  if (d < 2) throw std::invalid_argument("dft_target: d must be >= 2");
  Eigen::MatrixXcd u(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      u(j, k) = std::polar(norm, 2.0 * std::numbers::pi * ((j * k) % d) / d);
    }
  }
  return GateTarget(std::move(u), "dft(" + std::to_string(d) + ")");
}

double success_probability(const Eigen::MatrixXcd& block) {
  if (block.rows() != block.cols()) throw std::invalid_argument("success_probability: matrix must be square");
  return block.squaredNorm() / static_cast<double>(block.rows());
}

double fidelity(const Eigen::MatrixXcd& block, const Eigen::MatrixXcd& target) {
  if (block.rows() != target.rows() || block.cols() != target.cols()) {
    throw std::invalid_argument("fidelity: block and target shapes differ");
  }
  const double s = block.squaredNorm();
  if (s == 0.0) throw DegenerateInput("fidelity: zero matrix has no defined fidelity (P = 0)");
  const std::complex<double> overlap = (block.conjugate().cwiseProduct(target)).sum();
  return std::norm(overlap) / (s * static_cast<double>(block.rows()));
}

double fidelity(const Eigen::MatrixXcd& block, const GateTarget& target) {
  return fidelity(block, target.matrix());
}

double scatter_bound(int d) {
  if (d < 1) throw std::invalid_argument("scatter_bound: d must be >= 1");
  return static_cast<double>(d - 1) / static_cast<double>(2 * d - 1);
}

double single_eom_success_ceiling(int d) { return 1.0 - scatter_bound(d); }

namespace {
double power_watts(double beta, double v_pi, double impedance) {
  if (!(v_pi > 0.0)) throw std::invalid_argument("rf_power: v_pi must be positive");
  if (!(impedance > 0.0)) throw std::invalid_argument("rf_power: impedance must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("rf_power: beta must be >= 0");
  const double v_peak = beta * v_pi / std::numbers::pi;
  return v_peak * v_peak / (2.0 * impedance);
}

double to_dbm(double watts) {
  if (watts == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(watts / 1e-3);
}
}  // namespace

double rf_power_dbm(double beta, double v_pi, double impedance) {
  return to_dbm(power_watts(beta, v_pi, impedance));
}

double rf_power_dbm(const FourierDrive& drive, std::span<const double> v_pi, double impedance) {
  if (v_pi.empty() || (v_pi.size() != 1 && static_cast<int>(v_pi.size()) != drive.size())) {
    throw std::invalid_argument("rf_power: need one v_pi per harmonic or a single shared value");
  }
  double total = 0.0;
  for (int k = 0; k < drive.size(); ++k) {
    const double vp = v_pi.size() == 1 ? v_pi[0] : v_pi[static_cast<std::size_t>(k)];
    total += power_watts(drive.harmonics()[static_cast<std::size_t>(k)].amplitude, vp, impedance);
  }
  return to_dbm(total);
}

}  // namespace freqgate
