#include "freqgate/cascade.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace freqgate {

Eigen::VectorXcd eom_diagonal(const FourierDrive& drive, int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("eom_diagonal: mode count must be >= 1");
  drive.check_nyquist(mode_count);
  Eigen::VectorXcd d(mode_count);
  for (int j = 0; j < mode_count; ++j) {
    d[j] = std::polar(1.0, drive.phase_at(static_cast<double>(j) / mode_count));
  }
  return d;
}

Eigen::VectorXcd shaper_diagonal(const ShaperPattern& shaper) {
  Eigen::VectorXcd d(shaper.size());
  for (int j = 0; j < shaper.size(); ++j) d[j] = std::polar(shaper.amplitudes()[j], shaper.phases()[j]);
  return d;
}

CascadeLayers CascadeLayers::from(const FourierDrive& first, const ShaperPattern& shaper,
                                  const FourierDrive& second, int mode_count) {
  if (shaper.size() != mode_count) {
    throw std::invalid_argument("cascade: shaper length " + std::to_string(shaper.size()) +
                                " does not match lattice size " + std::to_string(mode_count));
  }
  return {eom_diagonal(first, mode_count), shaper_diagonal(shaper), eom_diagonal(second, mode_count)};
}

CascadeLayers CascadeLayers::identity(int mode_count) {
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(mode_count);
  return {one, one, one};
}

TransferMatrix toeplitz_from_drive(const FourierDrive& drive, const ModeLattice& lattice) {
  const int m = lattice.mode_count();
  const Eigen::VectorXcd d = eom_diagonal(drive, m);
  // F D F^H is circulant; build it from its first column c_q = (F D F^H)_{q,0}.
  std::vector<cplx> col(d.data(), d.data() + m);
  shared_fft_plan(m)->forward(col);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  // F^H e_0 = 1/sqrt(M), so the first column is F (d / sqrt(M)).
  Eigen::MatrixXcd v(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) v(r, c) = col[static_cast<std::size_t>(((r - c) % m + m) % m)] * scale;
  }
  return TransferMatrix(std::move(v), lattice, true);
}

TransferMatrix toeplitz_from_drive(const FourierDrive& drive, int mode_count) {
  return toeplitz_from_drive(drive, ModeLattice(mode_count, 1));
}

TransferMatrix compose_cascade(const FourierDrive& first, const ShaperPattern& shaper,
                               const FourierDrive& second, const ModeLattice& lattice) {
  const int m = lattice.mode_count();
  const auto layers = CascadeLayers::from(first, shaper, second, m);
  return TransferMatrix(CascadeEngine(m).full(layers), lattice, shaper.is_phase_only());
}

CascadeEngine::CascadeEngine(int mode_count) : m_(mode_count), plan_(shared_fft_plan(mode_count)) {}

CascadeEngine::CascadeEngine(int mode_count, const simd::KernelTable& kernels)
    : m_(mode_count), plan_(std::make_shared<const FftPlan>(mode_count, kernels)) {}

Eigen::MatrixXcd CascadeEngine::forward(const CascadeLayers& layers, std::span<const int> modes,
                                        Tape* tape) const {
  if (layers.first.size() != m_ || layers.shaper.size() != m_ || layers.second.size() != m_) {
    throw std::invalid_argument("cascade: layer sizes do not match the engine");
  }
  const auto& k = plan_->kernels();
  const std::size_t m = static_cast<std::size_t>(m_);
  const std::size_t cols = modes.size();
  if (tape) {
    tape->after_first.resize(cols * m);
    tape->after_shaper.resize(cols * m);
    tape->after_second.resize(cols * m);
  }
  std::vector<cplx> x(m);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(modes.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t c = 0; c < cols; ++c) {
    const int input = modes[c];
    if (input < 0 || input >= m_) throw std::invalid_argument("cascade: mode index out of range");
    std::fill(x.begin(), x.end(), cplx{});
    x[static_cast<std::size_t>(input)] = 1.0;
    plan_->inverse(x);
    k.mul_diag(x.data(), layers.first.data(), m);
    if (tape) std::copy(x.begin(), x.end(), tape->after_first.begin() + c * m);
    plan_->forward(x);
    k.mul_diag(x.data(), layers.shaper.data(), m);
    if (tape) std::copy(x.begin(), x.end(), tape->after_shaper.begin() + c * m);
    plan_->inverse(x);
    k.mul_diag(x.data(), layers.second.data(), m);
    if (tape) std::copy(x.begin(), x.end(), tape->after_second.begin() + c * m);
    plan_->forward(x);
    for (std::size_t r = 0; r < modes.size(); ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[static_cast<std::size_t>(modes[r])];
    }
  }
  return out;
}

void CascadeEngine::backward(const CascadeLayers& layers, std::span<const int> modes,
                             const Tape& tape, const Eigen::MatrixXcd& adjoint,
                             LayerPhaseGradient& grad) const {
  const auto& k = plan_->kernels();
  const std::size_t m = static_cast<std::size_t>(m_);
  grad.first = Eigen::VectorXd::Zero(m_);
  grad.shaper = Eigen::VectorXd::Zero(m_);
  grad.second = Eigen::VectorXd::Zero(m_);
  std::vector<cplx> lam(m);
  for (std::size_t c = 0; c < modes.size(); ++c) {
    std::fill(lam.begin(), lam.end(), cplx{});
    for (std::size_t r = 0; r < modes.size(); ++r) {
      lam[static_cast<std::size_t>(modes[r])] +=
          adjoint(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    // F and F^H are symmetric, so their transposes are themselves.
    plan_->forward(lam);
    k.phase_grad(grad.second.data(), lam.data(), tape.after_second.data() + c * m, m);
    k.mul_diag(lam.data(), layers.second.data(), m);
    plan_->inverse(lam);
    k.phase_grad(grad.shaper.data(), lam.data(), tape.after_shaper.data() + c * m, m);
    k.mul_diag(lam.data(), layers.shaper.data(), m);
    plan_->forward(lam);
    k.phase_grad(grad.first.data(), lam.data(), tape.after_first.data() + c * m, m);
  }
}

Eigen::MatrixXcd CascadeEngine::propagate(const CascadeLayers& layers,
                                          std::span<const int> inputs) const {
  const auto& k = plan_->kernels();
  const std::size_t m = static_cast<std::size_t>(m_);
  Eigen::MatrixXcd out(m_, static_cast<Eigen::Index>(inputs.size()));
  std::vector<cplx> x(m);
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    if (inputs[c] < 0 || inputs[c] >= m_) throw std::invalid_argument("cascade: mode index out of range");
    std::fill(x.begin(), x.end(), cplx{});
    x[static_cast<std::size_t>(inputs[c])] = 1.0;
    plan_->inverse(x);
    k.mul_diag(x.data(), layers.first.data(), m);
    plan_->forward(x);
    k.mul_diag(x.data(), layers.shaper.data(), m);
    plan_->inverse(x);
    k.mul_diag(x.data(), layers.second.data(), m);
    plan_->forward(x);
    out.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXcd>(x.data(), m_);
  }
  return out;
}

Eigen::MatrixXcd CascadeEngine::full(const CascadeLayers& layers) const {
  std::vector<int> all(static_cast<std::size_t>(m_));
  std::iota(all.begin(), all.end(), 0);
  return propagate(layers, all);
}

Eigen::MatrixXcd CascadeEngine::block(const CascadeLayers& layers, std::span<const int> modes) const {
  return forward(layers, modes, nullptr);
}

}  // namespace freqgate
