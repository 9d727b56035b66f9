#include "freqgate/transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace freqgate {

TransferMatrix::TransferMatrix(Eigen::MatrixXcd entries, ModeLattice lattice, bool unitary)
    : entries_(std::move(entries)), lattice_(lattice), unitary_(unitary) {
  const int m = lattice_.mode_count();
  if (entries_.rows() != m || entries_.cols() != m) {
    throw std::invalid_argument("transfer matrix: shape does not match lattice");
  }
  for (int c = 0; c < m; ++c) {
    if (entries_.col(c).squaredNorm() > 1.0 + 2e-10) {
      throw std::invalid_argument("transfer matrix: column norm exceeds 1");
    }
  }
}

TransferMatrix TransferMatrix::embed_window_block(const Eigen::MatrixXcd& block,
                                                  const ModeLattice& lattice) {
  const int d = lattice.dim();
  if (block.rows() != d || block.cols() != d) {
    throw std::invalid_argument("embed: block must be d x d for the lattice window");
  }
  const int m = lattice.mode_count();
  const int w = lattice.window_offset();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(m, m);
  v.block(w, w, d, d) = block;
  for (int n = 0; n < d; ++n) {
    const double kept = block.col(n).squaredNorm();
    if (kept > 1.0 + 1e-12) throw std::invalid_argument("embed: block column norm exceeds 1");
    const int sink = (w - 1 - n >= 0) ? w - 1 - n : lattice.window_end() + n;
    if (sink >= m) throw std::invalid_argument("embed: no room outside the window for scatter");
    v(sink, w + n) = std::sqrt(std::max(0.0, 1.0 - kept));
  }
  return TransferMatrix(std::move(v), lattice, false);
}

Eigen::MatrixXcd truncate(const TransferMatrix& v) {
  const auto& lat = v.lattice();
  return v.entries().block(lat.window_offset(), lat.window_offset(), lat.dim(), lat.dim());
}

double unitarity_defect(const Eigen::MatrixXcd& v) {
  const Eigen::MatrixXcd g = v.adjoint() * v;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace freqgate
