// SPDX-License-Identifier: Apache-2.0
//
// Complex vector kernels on split (real[], imag[]) storage. Every variant
// accumulates reductions in four interleaved lanes and combines them as
// (l0 + l1) + (l2 + l3) before the scalar tail, so all variants return
// bit-identical results on IEEE-754 hardware.
#pragma once

#include <cstddef>

namespace wpt::simd {

struct KernelTable {
  const char* name;
  /// sum |x_i|^2
  double (*sq_norm)(const double* re, const double* im, std::size_t n);
  /// sum conj(a_i) * b_i
  void (*dot_conj)(const double* are, const double* aim, const double* bre, const double* bim,
                   std::size_t n, double* out_re, double* out_im);
  /// y += a * x for a real scalar a (one component array).
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y += a * x for a complex scalar a.
  void (*caxpy)(double ar, double ai, const double* xre, const double* xim, double* yre,
                double* yim, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Null when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best supported variant, chosen once. WPT_SIMD=scalar forces the
/// reference kernels.
const KernelTable& active_kernels();

}  // namespace wpt::simd
