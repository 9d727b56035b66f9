#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/simd/kernels.hpp"

namespace freqgate {

using cplx = std::complex<double>;

/// Dense unitary DFT, F[j][k] = exp(-2 pi i j k / M) / sqrt(M).
Eigen::MatrixXcd dft_matrix(int mode_count);

/// In-place unitary transforms matching dft_matrix:
///   forward(x) = F x,   inverse(x) = F^H x.
///
/// Power-of-two sizes use an iterative radix-2 transform built on the SIMD
/// butterfly kernel; other sizes fall back to a tabulated O(M^2) transform.
class FftPlan {
 public:
  explicit FftPlan(int mode_count, const simd::KernelTable& kernels = simd::active_kernels());

  int size() const { return n_; }
  const simd::KernelTable& kernels() const { return *kernels_; }

  void forward(std::span<cplx> x) const { transform(x, false); }
  void inverse(std::span<cplx> x) const { transform(x, true); }

 private:
  void transform(std::span<cplx> x, bool inverse) const;
  void radix2(std::span<cplx> x, bool inverse) const;
  void direct(std::span<cplx> x, bool inverse) const;

  int n_;
  bool pow2_;
  const simd::KernelTable* kernels_;
  std::vector<int> bitrev_;
  // Per-stage twiddles laid out contiguously: stage with half-size h occupies
  // [h - 1, 2h - 1).
  std::vector<cplx> twiddle_fwd_;
  std::vector<cplx> twiddle_inv_;
  std::vector<cplx> roots_;  // exp(-2 pi i k / M), direct path only
};

/// Shared plan per size. Plans are immutable and safe to use concurrently.
std::shared_ptr<const FftPlan> shared_fft_plan(int mode_count);

}  // namespace freqgate
