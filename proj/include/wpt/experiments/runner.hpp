// SPDX-License-Identifier: Apache-2.0
//
// Sweep execution. Points run on a worker pool; rows always come back in
// axis order.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "wpt/experiments/spec.hpp"

namespace wpt::experiments {

/// Where a value comes from. `input` marks sweep coordinates.
enum class Provenance { input, analytic, optimizer, monte_carlo };

const char* to_string(Provenance p);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Column {
  std::string name;
  Provenance provenance = Provenance::analytic;
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  /// Strongest tag among the row's non-empty cells, with
  /// monte_carlo > optimizer > analytic.
  Provenance row_provenance(std::size_t row) const;

  /// Header plus one line per row; a trailing "provenance" column carries
  /// row_provenance().
  void write_csv(std::ostream& out) const;

  std::size_t column_index(const std::string& name) const;
};

struct RunOptions {
  int workers = 0;  // 0: WPT_WORKERS or the hardware thread count
};

/// One row per sweep point.
Table run_experiment(const ExperimentSpec& spec, RunOptions opt = {});

/// Closed-form optimizers against brute-force search on the preset's
/// fixture. Throws ValidationError for presets without an optimizer.
Table compare_optimizers(const ExperimentSpec& spec, RunOptions opt = {});

}  // namespace wpt::experiments
