// Compiled with -mavx2 -mfma. Nothing in this translation unit may run
// before the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "freqgate/simd/kernels.hpp"

namespace freqgate::simd {
namespace {

// Two packed complex products: [a0 a1] * [b0 b1].
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void mul_diag_avx2(cplx* x, const cplx* d, std::size_t n) {
  auto* xp = reinterpret_cast<double*>(x);
  const auto* dp = reinterpret_cast<const double*>(d);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * j);
    const __m256d dv = _mm256_loadu_pd(dp + 2 * j);
    _mm256_storeu_pd(xp + 2 * j, cmul2(xv, dv));
  }
  for (; j < n; ++j) x[j] *= d[j];
}

void butterfly_avx2(cplx* lo, cplx* hi, const cplx* tw, std::size_t n) {
  auto* lp = reinterpret_cast<double*>(lo);
  auto* hp = reinterpret_cast<double*>(hi);
  const auto* wp = reinterpret_cast<const double*>(tw);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d t = cmul2(_mm256_loadu_pd(hp + 2 * j), _mm256_loadu_pd(wp + 2 * j));
    const __m256d l = _mm256_loadu_pd(lp + 2 * j);
    _mm256_storeu_pd(hp + 2 * j, _mm256_sub_pd(l, t));
    _mm256_storeu_pd(lp + 2 * j, _mm256_add_pd(l, t));
  }
  for (; j < n; ++j) {
    const cplx t = tw[j] * hi[j];
    hi[j] = lo[j] - t;
    lo[j] = lo[j] + t;
  }
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  const auto* xp = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(xp + 2 * j);
    const __m256d b = _mm256_loadu_pd(xp + 2 * j + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  for (; j < n; ++j) total += std::norm(x[j]);
  return total;
}

void phase_grad_avx2(double* grad, const cplx* adj, const cplx* z, std::size_t n) {
  const auto* ap = reinterpret_cast<const double*>(adj);
  const auto* zp = reinterpret_cast<const double*>(z);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    // [ar*zi, ai*zr] per complex, then pairwise sums.
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(ap + 2 * j),
                                     _mm256_permute_pd(_mm256_loadu_pd(zp + 2 * j), 0x5));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(ap + 2 * j + 4),
                                     _mm256_permute_pd(_mm256_loadu_pd(zp + 2 * j + 4), 0x5));
    const __m256d h = _mm256_hadd_pd(p0, p1);  // [c0 c2 c1 c3]
    const __m256d ordered = _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(grad + j, _mm256_sub_pd(_mm256_loadu_pd(grad + j), ordered));
  }
  for (; j < n; ++j) {
    grad[j] -= adj[j].real() * z[j].imag() + adj[j].imag() * z[j].real();
  }
}

void scale_avx2(cplx* x, double s, std::size_t n) {
  auto* xp = reinterpret_cast<double*>(x);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    _mm256_storeu_pd(xp + 2 * j, _mm256_mul_pd(_mm256_loadu_pd(xp + 2 * j), sv));
  }
  for (; j < n; ++j) x[j] *= s;
}

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_built() {
  static const KernelTable table{Isa::avx2, mul_diag_avx2, butterfly_avx2,
                                 norm_sq_avx2, phase_grad_avx2, scale_avx2};
  return &table;
}
}  // namespace detail

}  // namespace freqgate::simd
