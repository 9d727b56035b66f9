#pragma once

#include <Eigen/Dense>

#include "freqgate/lattice.hpp"

namespace freqgate {

/// Frequency-basis matrix of a component or cascade over the whole lattice.
/// Column norms never exceed 1 + 1e-10; `unitary()` is true when every stage
/// that built it was phase-only.
class TransferMatrix {
 public:
  TransferMatrix(Eigen::MatrixXcd entries, ModeLattice lattice, bool unitary);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  const ModeLattice& lattice() const { return lattice_; }
  bool unitary() const { return unitary_; }

  /// Identity on the lattice with the d x d window replaced by `block`. Each
  /// column's missing norm is routed to a bin outside the window, so a
  /// total-power measurement still sees a lossless device.
  static TransferMatrix embed_window_block(const Eigen::MatrixXcd& block,
                                           const ModeLattice& lattice);

 private:
  Eigen::MatrixXcd entries_;
  ModeLattice lattice_;
  bool unitary_;
};

/// The d x d sub-block on the computational window.
Eigen::MatrixXcd truncate(const TransferMatrix& v);

/// max |(V^H V - I)_{jk}|
double unitarity_defect(const Eigen::MatrixXcd& v);

}  // namespace freqgate
