// SPDX-License-Identifier: Apache-2.0
#include "wpt/simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace wpt::simd {

namespace {

// Two 2-lane registers stand in for the four reference lanes.

double sq_norm(const double* re, const double* im, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t r0 = vld1q_f64(re + i);
    const float64x2_t r1 = vld1q_f64(re + i + 2);
    const float64x2_t m0 = vld1q_f64(im + i);
    const float64x2_t m1 = vld1q_f64(im + i + 2);
    lo = vaddq_f64(lo, vaddq_f64(vmulq_f64(r0, r0), vmulq_f64(m0, m0)));
    hi = vaddq_f64(hi, vaddq_f64(vmulq_f64(r1, r1), vmulq_f64(m1, m1)));
  }
  double s = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) s += re[i] * re[i] + im[i] * im[i];
  return s;
}

void dot_conj(const double* are, const double* aim, const double* bre, const double* bim,
              std::size_t n, double* out_re, double* out_im) {
  float64x2_t r_lo = vdupq_n_f64(0.0), r_hi = vdupq_n_f64(0.0);
  float64x2_t i_lo = vdupq_n_f64(0.0), i_hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int h = 0; h < 2; ++h) {
      const std::size_t j = i + 2 * h;
      const float64x2_t xr = vld1q_f64(are + j);
      const float64x2_t xi = vld1q_f64(aim + j);
      const float64x2_t yr = vld1q_f64(bre + j);
      const float64x2_t yi = vld1q_f64(bim + j);
      const float64x2_t dr = vaddq_f64(vmulq_f64(xr, yr), vmulq_f64(xi, yi));
      const float64x2_t di = vsubq_f64(vmulq_f64(xr, yi), vmulq_f64(xi, yr));
      if (h == 0) {
        r_lo = vaddq_f64(r_lo, dr);
        i_lo = vaddq_f64(i_lo, di);
      } else {
        r_hi = vaddq_f64(r_hi, dr);
        i_hi = vaddq_f64(i_hi, di);
      }
    }
  }
  double sr = (vgetq_lane_f64(r_lo, 0) + vgetq_lane_f64(r_lo, 1)) +
              (vgetq_lane_f64(r_hi, 0) + vgetq_lane_f64(r_hi, 1));
  double si = (vgetq_lane_f64(i_lo, 0) + vgetq_lane_f64(i_lo, 1)) +
              (vgetq_lane_f64(i_hi, 0) + vgetq_lane_f64(i_hi, 1));
  for (; i < n; ++i) {
    sr += are[i] * bre[i] + aim[i] * bim[i];
    si += are[i] * bim[i] - aim[i] * bre[i];
  }
  *out_re = sr;
  *out_im = si;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void caxpy(double ar, double ai, const double* xre, const double* xim, double* yre, double* yim,
           std::size_t n) {
  const float64x2_t vr = vdupq_n_f64(ar);
  const float64x2_t vi = vdupq_n_f64(ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(xre + i);
    const float64x2_t m = vld1q_f64(xim + i);
    const float64x2_t dr = vsubq_f64(vmulq_f64(vr, r), vmulq_f64(vi, m));
    const float64x2_t di = vaddq_f64(vmulq_f64(vr, m), vmulq_f64(vi, r));
    vst1q_f64(yre + i, vaddq_f64(vld1q_f64(yre + i), dr));
    vst1q_f64(yim + i, vaddq_f64(vld1q_f64(yim + i), di));
  }
  for (; i < n; ++i) {
    const double r = xre[i];
    const double m = xim[i];
    yre[i] += ar * r - ai * m;
    yim[i] += ar * m + ai * r;
  }
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", sq_norm, dot_conj, axpy, caxpy};
  return &table;
}

}  // namespace wpt::simd

#else

namespace wpt::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace wpt::simd

#endif
