// SPDX-License-Identifier: Apache-2.0
#include "wpt/simd/kernels.hpp"

namespace wpt::simd {

namespace {

double sq_norm(const double* re, const double* im, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) acc[l] += re[i + l] * re[i + l] + im[i + l] * im[i + l];
  }
  double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) s += re[i] * re[i] + im[i] * im[i];
  return s;
}

void dot_conj(const double* are, const double* aim, const double* bre, const double* bim,
              std::size_t n, double* out_re, double* out_im) {
  double ar[4] = {0.0, 0.0, 0.0, 0.0};
  double ai[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const std::size_t j = i + l;
      ar[l] += are[j] * bre[j] + aim[j] * bim[j];
      ai[l] += are[j] * bim[j] - aim[j] * bre[j];
    }
  }
  double sr = (ar[0] + ar[1]) + (ar[2] + ar[3]);
  double si = (ai[0] + ai[1]) + (ai[2] + ai[3]);
  for (; i < n; ++i) {
    sr += are[i] * bre[i] + aim[i] * bim[i];
    si += are[i] * bim[i] - aim[i] * bre[i];
  }
  *out_re = sr;
  *out_im = si;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void caxpy(double ar, double ai, const double* xre, const double* xim, double* yre, double* yim,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = xre[i];
    const double m = xim[i];
    yre[i] += ar * r - ai * m;
    yim[i] += ar * m + ai * r;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", sq_norm, dot_conj, axpy, caxpy};
  return table;
}

}  // namespace wpt::simd
