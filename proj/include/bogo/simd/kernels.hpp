#pragma once

// Data-parallel inner loops shared by the Fock-space and grid code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at runtime from CPUID; the
// environment variable BOGOCHANNEL_SIMD=scalar forces the reference path.
// Results of the two paths agree to rounding (reductions are reassociated).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace bogo::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// Compressed sparse row view; `outer` has rows+1 entries.
struct CsrView {
  std::span<const int> outer;
  std::span<const int> inner;
  std::span<const cplx> values;
};

struct KernelTable {
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  void (*scale)(cplx s, cplx* x, std::size_t n);
  cplx (*dot)(const cplx* x, const cplx* y, std::size_t n);
  double (*norm_sq)(const cplx* x, std::size_t n);
  void (*csr_matvec)(const int* outer, const int* inner, const cplx* values, std::size_t rows,
                     const cplx* x, cplx* y);
  void (*stencil_pair)(cplx scale, const double* ca, const double* cb, const cplx* f,
                       std::ptrdiff_t stride_a, std::ptrdiff_t stride_b, cplx* out,
                       std::size_t n);
};

const KernelTable& scalar_table();
#if defined(BOGO_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif

bool isa_available(Isa isa);
Isa active_isa();
// Overrides the runtime choice (tests use this to compare paths).
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

const KernelTable& table();

// y += alpha * x
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  table().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(cplx s, std::span<cplx> x) { table().scale(s, x.data(), x.size()); }
// sum_i conj(x_i) * y_i
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return table().dot(x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const cplx> x) { return table().norm_sq(x.data(), x.size()); }
// y = A x
inline void csr_matvec(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  table().csr_matvec(a.outer.data(), a.inner.data(), a.values.data(), a.outer.size() - 1,
                     x.data(), y.data());
}
// out[j] += scale * (ca[j] * (f[j+sa] - f[j-sa]) - cb[j] * (f[j+sb] - f[j-sb]))
inline void stencil_pair(cplx s, std::span<const double> ca, std::span<const double> cb,
                         const cplx* f, std::ptrdiff_t stride_a, std::ptrdiff_t stride_b,
                         std::span<cplx> out) {
  table().stencil_pair(s, ca.data(), cb.data(), f, stride_a, stride_b, out.data(), out.size());
}

}  // namespace bogo::simd
