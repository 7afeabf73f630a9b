// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace wpt {

/// Principal branch of the Lambert W function: the w >= -1 solving
/// w * exp(w) = x. Throws DomainError for x < -1/e.
double lambert_w0(double x);

}  // namespace wpt
