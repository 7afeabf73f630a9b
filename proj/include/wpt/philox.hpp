// SPDX-License-Identifier: Apache-2.0
//
// Philox4x64-10 counter-based generator (Salmon et al., SC'11), bit-compatible
// with the Random123 reference and numpy's Philox bit generator.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace wpt {

class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr int kRounds = 10;

  static Counter block(Counter ctr, Key key) {
    for (int r = 0; r < kRounds; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static Counter round(const Counter& c, const Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Circularly-symmetric complex Gaussians CN(0, 1) for one (seed, trial,
/// stream) triple. The counter is {block, trial, stream, 0} and the key is
/// {seed, 0}, so every trial owns a disjoint counter range and trials can
/// be generated in any order.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
      : key_{seed, 0}, trial_(trial), stream_(stream) {}

  /// Writes n draws as split real/imaginary parts. Each part has variance
  /// 1/2 (Box-Muller on two uniforms per draw).
  void fill(double* re, double* im, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (used_ == 4) refill();
      const std::uint64_t a = buf_[used_];
      const std::uint64_t b = buf_[used_ + 1];
      used_ += 2;
      // u1 in (0, 1], u2 in [0, 1).
      const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
      const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
      const double r = std::sqrt(-std::log(u1));
      const double t = kTwoPi * u2;
      re[i] = r * std::cos(t);
      im[i] = r * std::sin(t);
    }
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  void refill() {
    buf_ = Philox4x64::block({block_++, trial_, stream_, 0}, key_);
    used_ = 0;
  }

  Philox4x64::Key key_;
  std::uint64_t trial_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x64::Counter buf_{};
  int used_ = 4;
};

}  // namespace wpt
