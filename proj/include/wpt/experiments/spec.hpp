// SPDX-License-Identifier: Apache-2.0
//
// Experiment descriptions: a preset fixture plus a one-dimensional sweep,
// parsed from flat key=value text.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wpt/errors.hpp"
#include "wpt/rate_ee.hpp"
#include "wpt/scenario.hpp"

namespace wpt::experiments {

enum class Preset {
  fig2_harvest_vs_m,
  fig3_pte_vs_m,
  fig4_xi_sweep,
  fig5_ee_vs_m,
  fig6_per_antenna_power,
  fig7_ee_vs_m_k50,
  fig8_rate_vs_m,
  custom,
};

const char* to_string(Preset p);

/// Throws ValidationError listing the valid names.
Preset parse_preset(std::string_view name);

const std::vector<Preset>& all_presets();

enum class AxisScale { linear, log };

/// Sweep variables: "M" (antennas), "K" (users), "xi", "p_dl" (W).
struct SweepAxis {
  std::string name = "M";
  double start = 1.0;
  double stop = 100.0;
  int points = 2;
  AxisScale scale = AxisScale::linear;

  bool is_integer() const { return name == "M" || name == "K"; }

  /// Grid values. Integer axes are rounded and de-duplicated, so they can
  /// have fewer than `points` entries.
  std::vector<double> values() const;
};

/// Malformed config text. The message starts with "line N:".
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ExperimentSpec {
  Preset preset = Preset::custom;
  SystemScenario scenario;
  std::vector<int> users{1};   // one column group per entry
  AntennaCount antennas = 100; // used when the axis is not M
  SweepAxis axis;
  std::int64_t n_trials = 10000;
  std::uint64_t seed = 1;
  bool monte_carlo = false;
  PowerSelectionOptions selection;
  /// Every key=value applied on top of the preset fixture, in order.
  std::vector<std::pair<std::string, std::string>> overrides;

  /// Users for a given axis value: the axis itself when sweeping K.
  std::vector<int> users_at(double axis_value) const;

  void validate() const;
};

/// The fixture and sweep behind a preset.
ExperimentSpec preset_spec(Preset p);

/// Applies one setting. Throws ConfigError for unknown keys and values that
/// do not parse; `line` is only used in messages (0 omits it).
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value,
                   int line = 0);

/// Parses config text, then applies `settings` on top (command-line
/// overrides; a "preset" entry there replaces the file's preset). Runs
/// validate() on the result.
ExperimentSpec parse_config(std::string_view text,
                            const std::vector<std::pair<std::string, std::string>>& settings = {});

/// Every effective parameter as sorted key=value lines. Two specs with the
/// same canonical text run the same experiment.
std::string canonical_text(const ExperimentSpec& spec);

/// One line per key with its unit, for --help.
std::string config_reference();

}  // namespace wpt::experiments
