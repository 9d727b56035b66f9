#pragma once

// Data-parallel inner loops of the cascade engine.
//
// Every kernel has a portable scalar reference implementation; an AVX2+FMA
// variant is compiled separately and picked at runtime when the CPU reports
// support. FREQGATE_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace freqgate::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // x[j] *= d[j]
  void (*mul_diag)(cplx* x, const cplx* d, std::size_t n);

  // One radix-2 stage over a contiguous block:
  //   t = tw[j] * hi[j];  hi[j] = lo[j] - t;  lo[j] = lo[j] + t
  void (*butterfly)(cplx* lo, cplx* hi, const cplx* tw, std::size_t n);

  // sum |x[j]|^2
  double (*norm_sq)(const cplx* x, std::size_t n);

  // grad[j] -= Im(adj[j] * z[j])
  void (*phase_grad)(double* grad, const cplx* adj, const cplx* z, std::size_t n);

  // x[j] *= s
  void (*scale)(cplx* x, double s, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not built or the CPU lacks the instructions.
const KernelTable* avx2_kernels();

// The table used by the library; fixed on first use for the whole process.
const KernelTable& active_kernels();

bool cpu_supports_avx2();

namespace detail {
const KernelTable* avx2_table_if_built();
}

}  // namespace freqgate::simd
