// SPDX-License-Identifier: Apache-2.0
#include "wpt/lambert.hpp"

#include <cmath>
#include <limits>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series about the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 3.0) return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0 of NaN");
  if (x < -kInvE) {
    // Allow rounding noise at the branch point itself.
    if (x < -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
      throw DomainError("lambert_w0 argument below -1/e");
    }
    return -1.0;
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x);
  for (int i = 0; i < 64; ++i) {
    // Halley step on f(w) = w e^w - x.
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w < -1.0 ? -1.0 : w;
}

}  // namespace wpt
