#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/drive.hpp"
#include "freqgate/fourier.hpp"
#include "freqgate/lattice.hpp"
#include "freqgate/transfer.hpp"

namespace freqgate {

/// exp(i phi(t_j)) with t_j = j T / M, j = 0..M-1 (time-basis EOM operator).
Eigen::VectorXcd eom_diagonal(const FourierDrive& drive, int mode_count);

/// a_j exp(i phi_j) (frequency-basis shaper operator).
Eigen::VectorXcd shaper_diagonal(const ShaperPattern& shaper);

/// Single EOM in the frequency basis, F D F^H. Entry (m, n) depends only on
/// m - n: it is the Fourier coefficient of exp(i phi(t)) at exp(+i (m-n) dw t),
/// so a pure sine drive beta sin(dw t) gives J_{m-n}(beta).
TransferMatrix toeplitz_from_drive(const FourierDrive& drive, const ModeLattice& lattice);
TransferMatrix toeplitz_from_drive(const FourierDrive& drive, int mode_count);

/// EOM - shaper - EOM cascade V = F D3 F^H D2 F D1 F^H.
TransferMatrix compose_cascade(const FourierDrive& first, const ShaperPattern& shaper,
                               const FourierDrive& second, const ModeLattice& lattice);

/// Diagonals of the three stages of a cascade.
struct CascadeLayers {
  Eigen::VectorXcd first;
  Eigen::VectorXcd shaper;
  Eigen::VectorXcd second;

  static CascadeLayers from(const FourierDrive& first, const ShaperPattern& shaper,
                            const FourierDrive& second, int mode_count);
  static CascadeLayers identity(int mode_count);
};

/// Gradient of a real loss with respect to the phase of every diagonal entry.
struct LayerPhaseGradient {
  Eigen::VectorXd first;
  Eigen::VectorXd shaper;
  Eigen::VectorXd second;
};

/// Column-by-column cascade evaluation with FFTs, plus the adjoint pass used by
/// the optimizer. Only the columns that are actually needed get propagated.
class CascadeEngine {
 public:
  explicit CascadeEngine(int mode_count);
  CascadeEngine(int mode_count, const simd::KernelTable& kernels);

  int mode_count() const { return m_; }

  /// Output columns (M x k) for unit inputs at the given lattice indices.
  Eigen::MatrixXcd propagate(const CascadeLayers& layers, std::span<const int> inputs) const;

  /// Full M x M cascade.
  Eigen::MatrixXcd full(const CascadeLayers& layers) const;

  /// Sub-block V[modes, modes].
  Eigen::MatrixXcd block(const CascadeLayers& layers, std::span<const int> modes) const;

  /// Sub-block plus the phase gradient of a loss L(block). `adjoint` maps the
  /// block to G with dL = Re sum_{mn} G_mn dV_mn.
  template <class AdjointFn>
  Eigen::MatrixXcd block_with_gradient(const CascadeLayers& layers, std::span<const int> modes,
                                       AdjointFn&& adjoint, LayerPhaseGradient& grad) const {
    Tape tape;
    Eigen::MatrixXcd v = forward(layers, modes, &tape);
    const Eigen::MatrixXcd g = adjoint(static_cast<const Eigen::MatrixXcd&>(v));
    backward(layers, modes, tape, g, grad);
    return v;
  }

 private:
  struct Tape {
    std::vector<cplx> after_first;   // b = D1 F^H x
    std::vector<cplx> after_shaper;  // e = D2 F b
    std::vector<cplx> after_second;  // g = D3 F^H e
  };

  Eigen::MatrixXcd forward(const CascadeLayers& layers, std::span<const int> modes,
                           Tape* tape) const;
  void backward(const CascadeLayers& layers, std::span<const int> modes, const Tape& tape,
                const Eigen::MatrixXcd& adjoint, LayerPhaseGradient& grad) const;

  int m_;
  std::shared_ptr<const FftPlan> plan_;
};

}  // namespace freqgate
