// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string_view>

#include "wpt/simd/kernels.hpp"

namespace wpt::simd {

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("WPT_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    if (const KernelTable* t = neon_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace wpt::simd
