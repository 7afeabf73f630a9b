// SPDX-License-Identifier: Apache-2.0
#include "wpt/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace wpt::simd {

namespace {

#define WPT_AVX2 __attribute__((target("avx2")))

WPT_AVX2 double hsum(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

WPT_AVX2 double sq_norm(const double* re, const double* im, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += re[i] * re[i] + im[i] * im[i];
  return s;
}

WPT_AVX2 void dot_conj(const double* are, const double* aim, const double* bre,
                       const double* bim, std::size_t n, double* out_re, double* out_im) {
  __m256d accr = _mm256_setzero_pd();
  __m256d acci = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(are + i);
    const __m256d xi = _mm256_loadu_pd(aim + i);
    const __m256d yr = _mm256_loadu_pd(bre + i);
    const __m256d yi = _mm256_loadu_pd(bim + i);
    accr = _mm256_add_pd(accr, _mm256_add_pd(_mm256_mul_pd(xr, yr), _mm256_mul_pd(xi, yi)));
    acci = _mm256_add_pd(acci, _mm256_sub_pd(_mm256_mul_pd(xr, yi), _mm256_mul_pd(xi, yr)));
  }
  double sr = hsum(accr);
  double si = hsum(acci);
  for (; i < n; ++i) {
    sr += are[i] * bre[i] + aim[i] * bim[i];
    si += are[i] * bim[i] - aim[i] * bre[i];
  }
  *out_re = sr;
  *out_im = si;
}

WPT_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                          _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

WPT_AVX2 void caxpy(double ar, double ai, const double* xre, const double* xim, double* yre,
                    double* yim, std::size_t n) {
  const __m256d vr = _mm256_set1_pd(ar);
  const __m256d vi = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(xre + i);
    const __m256d m = _mm256_loadu_pd(xim + i);
    const __m256d dr = _mm256_sub_pd(_mm256_mul_pd(vr, r), _mm256_mul_pd(vi, m));
    const __m256d di = _mm256_add_pd(_mm256_mul_pd(vr, m), _mm256_mul_pd(vi, r));
    _mm256_storeu_pd(yre + i, _mm256_add_pd(_mm256_loadu_pd(yre + i), dr));
    _mm256_storeu_pd(yim + i, _mm256_add_pd(_mm256_loadu_pd(yim + i), di));
  }
  for (; i < n; ++i) {
    const double r = xre[i];
    const double m = xim[i];
    yre[i] += ar * r - ai * m;
    yim[i] += ar * m + ai * r;
  }
}

#undef WPT_AVX2

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", sq_norm, dot_conj, axpy, caxpy};
  return __builtin_cpu_supports("avx2") ? &table : nullptr;
}

}  // namespace wpt::simd

#else

namespace wpt::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace wpt::simd

#endif
