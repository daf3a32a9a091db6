// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "bogo/simd/kernels.hpp"

namespace bogo::simd {
namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d bcast(cplx c) { return _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag()); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline cplx hsum2(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

// [c0, c1] -> [c0, c0, c1, c1]
inline __m256d dup_pair(const double* c) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(c)), 0x50);
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d a = bcast(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(a, load2(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(cplx s, cplx* x, std::size_t n) {
  const __m256d a = bcast(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, cmul(a, load2(x + i)));
  for (; i < n; ++i) x[i] *= s;
}

cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);                            // xr*yr, xi*yi
    acc_im = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0x5), yv, acc_im);    // xi*yr, xr*yi
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(m, acc_im);
  double re = r[0] + r[1] + r[2] + r[3];
  double im = (m[1] - m[0]) + (m[3] - m[2]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double r[4];
  _mm256_store_pd(r, acc);
  double s = (r[0] + r[1]) + (r[2] + r[3]);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void csr_matvec_avx2(const int* outer, const int* inner, const cplx* values, std::size_t rows,
                     const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  for (std::size_t r = 0; r < rows; ++r) {
    __m256d acc = _mm256_setzero_pd();
    int k = outer[r];
    const int end = outer[r + 1];
    for (; k + 2 <= end; k += 2) {
      const __m256d xv = _mm256_set_m128d(_mm_loadu_pd(xd + 2 * inner[k + 1]),
                                          _mm_loadu_pd(xd + 2 * inner[k]));
      acc = _mm256_add_pd(acc, cmul(load2(values + k), xv));
    }
    cplx s = hsum2(acc);
    for (; k < end; ++k) s += values[k] * x[inner[k]];
    y[r] = s;
  }
}

void stencil_pair_avx2(cplx s, const double* ca, const double* cb, const cplx* f,
                       std::ptrdiff_t sa, std::ptrdiff_t sb, cplx* out, std::size_t n) {
  const __m256d sv = bcast(s);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j);
    const __m256d da = _mm256_sub_pd(load2(f + i + sa), load2(f + i - sa));
    const __m256d db = _mm256_sub_pd(load2(f + i + sb), load2(f + i - sb));
    const __m256d t = _mm256_fmsub_pd(dup_pair(ca + j), da, _mm256_mul_pd(dup_pair(cb + j), db));
    store2(out + j, _mm256_add_pd(load2(out + j), cmul(sv, t)));
  }
  for (; j < n; ++j) {
    const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j);
    out[j] += s * (ca[j] * (f[i + sa] - f[i - sa]) - cb[j] * (f[i + sb] - f[i - sb]));
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{axpy_avx2,    scale_avx2,      dot_avx2,
                             norm_sq_avx2, csr_matvec_avx2, stencil_pair_avx2};
  return t;
}

}  // namespace bogo::simd
