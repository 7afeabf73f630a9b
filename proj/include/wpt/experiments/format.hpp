// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wpt::experiments {

/// Shortest text that reads back to the same double ("inf" for +inf).
std::string format_number(double x);

std::string format_number(std::int64_t x);

/// RFC 4180 field: quoted only when it holds a comma, quote or line break.
std::string csv_field(std::string_view s);

}  // namespace wpt::experiments
