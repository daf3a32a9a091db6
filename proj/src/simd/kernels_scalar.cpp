#include "bogo/simd/kernels.hpp"

namespace bogo::simd {
namespace {

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cplx s, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void csr_matvec_scalar(const int* outer, const int* inner, const cplx* values, std::size_t rows,
                       const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double re = 0.0, im = 0.0;
    for (int k = outer[r]; k < outer[r + 1]; ++k) {
      const cplx v = values[k];
      const cplx xv = x[inner[k]];
      re += v.real() * xv.real() - v.imag() * xv.imag();
      im += v.real() * xv.imag() + v.imag() * xv.real();
    }
    y[r] = {re, im};
  }
}

void stencil_pair_scalar(cplx s, const double* ca, const double* cb, const cplx* f,
                         std::ptrdiff_t sa, std::ptrdiff_t sb, cplx* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j);
    const cplx da = f[i + sa] - f[i - sa];
    const cplx db = f[i + sb] - f[i - sb];
    out[j] += s * (ca[j] * da - cb[j] * db);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{axpy_scalar,       scale_scalar,       dot_scalar,
                             norm_sq_scalar,    csr_matvec_scalar,  stencil_pair_scalar};
  return t;
}

}  // namespace bogo::simd
