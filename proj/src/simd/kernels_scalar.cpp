#include "freqgate/simd/kernels.hpp"

namespace freqgate::simd {
namespace {

void mul_diag_scalar(cplx* x, const cplx* d, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    const double dr = d[j].real(), di = d[j].imag();
    x[j] = cplx(xr * dr - xi * di, xr * di + xi * dr);
  }
}

void butterfly_scalar(cplx* lo, cplx* hi, const cplx* tw, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double hr = hi[j].real(), hv = hi[j].imag();
    const double wr = tw[j].real(), wi = tw[j].imag();
    const double tr = hr * wr - hv * wi;
    const double ti = hr * wi + hv * wr;
    const double lr = lo[j].real(), li = lo[j].imag();
    hi[j] = cplx(lr - tr, li - ti);
    lo[j] = cplx(lr + tr, li + ti);
  }
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += x[j].real() * x[j].real() + x[j].imag() * x[j].imag();
  }
  return acc;
}

void phase_grad_scalar(double* grad, const cplx* adj, const cplx* z, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    grad[j] -= adj[j].real() * z[j].imag() + adj[j].imag() * z[j].real();
  }
}

void scale_scalar(cplx* x, double s, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) x[j] *= s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, mul_diag_scalar, butterfly_scalar,
                                 norm_sq_scalar, phase_grad_scalar, scale_scalar};
  return table;
}

}  // namespace freqgate::simd
