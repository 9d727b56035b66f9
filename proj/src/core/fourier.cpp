#include "freqgate/fourier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace freqgate {

Eigen::MatrixXcd dft_matrix(int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("dft_matrix: size must be >= 1");
  const int m = mode_count;
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  Eigen::MatrixXcd f(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      // Reduce j*k mod M first so large sizes keep full phase accuracy.
      const long long jk = (static_cast<long long>(j) * k) % m;
      f(j, k) = std::polar(norm, -2.0 * std::numbers::pi * static_cast<double>(jk) / m);
    }
  }
  return f;
}

FftPlan::FftPlan(int mode_count, const simd::KernelTable& kernels)
    : n_(mode_count), pow2_(mode_count > 0 && (mode_count & (mode_count - 1)) == 0),
      kernels_(&kernels) {
  if (n_ < 1) throw std::invalid_argument("fft: size must be >= 1");
  if (pow2_) {
    int bits = 0;
    while ((1 << bits) < n_) ++bits;
    bitrev_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b) {
        if (i & (1 << b)) r |= 1 << (bits - 1 - b);
      }
      bitrev_[i] = r;
    }
    twiddle_fwd_.resize(n_ > 1 ? n_ - 1 : 0);
    twiddle_inv_.resize(twiddle_fwd_.size());
    for (int h = 1; h < n_; h <<= 1) {
      for (int j = 0; j < h; ++j) {
        const double angle = std::numbers::pi * j / h;
        twiddle_fwd_[h - 1 + j] = std::polar(1.0, -angle);
        twiddle_inv_[h - 1 + j] = std::polar(1.0, angle);
      }
    }
  } else {
    roots_.resize(n_);
    for (int k = 0; k < n_; ++k) roots_[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / n_);
  }
}

void FftPlan::transform(std::span<cplx> x, bool inverse) const {
  if (static_cast<int>(x.size()) != n_) {
    throw std::invalid_argument("fft: buffer length does not match plan size");
  }
  if (pow2_) {
    radix2(x, inverse);
  } else {
    direct(x, inverse);
  }
}

void FftPlan::radix2(std::span<cplx> x, bool inverse) const {
  for (int i = 0; i < n_; ++i) {
    const int r = bitrev_[i];
    if (r > i) std::swap(x[i], x[r]);
  }
  const auto& tw = inverse ? twiddle_inv_ : twiddle_fwd_;
  for (int h = 1; h < n_; h <<= 1) {
    const cplx* stage = tw.data() + (h - 1);
    for (int block = 0; block < n_; block += 2 * h) {
      kernels_->butterfly(x.data() + block, x.data() + block + h, stage, static_cast<std::size_t>(h));
    }
  }
  kernels_->scale(x.data(), 1.0 / std::sqrt(static_cast<double>(n_)), x.size());
}

void FftPlan::direct(std::span<cplx> x, bool inverse) const {
  thread_local std::vector<cplx> out;
  out.assign(n_, cplx{});
  for (int k = 0; k < n_; ++k) {
    cplx acc{};
    for (int j = 0; j < n_; ++j) {
      const int idx = static_cast<int>((static_cast<long long>(j) * k) % n_);
      acc += x[j] * (inverse ? std::conj(roots_[idx]) : roots_[idx]);
    }
    out[k] = acc;
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
  for (int k = 0; k < n_; ++k) x[k] = out[k] * norm;
}

std::shared_ptr<const FftPlan> shared_fft_plan(int mode_count) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[mode_count];
  if (!slot) slot = std::make_shared<const FftPlan>(mode_count);
  return slot;
}

}  // namespace freqgate
