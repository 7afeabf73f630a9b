// SPDX-License-Identifier: Apache-2.0
#include "wpt/experiments/spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "wpt/experiments/format.hpp"

namespace wpt::experiments {

namespace {

struct PresetName {
  Preset preset;
  const char* name;
};

constexpr PresetName kPresetNames[] = {
    {Preset::fig2_harvest_vs_m, "fig2_harvest_vs_m"},
    {Preset::fig3_pte_vs_m, "fig3_pte_vs_m"},
    {Preset::fig4_xi_sweep, "fig4_xi_sweep"},
    {Preset::fig5_ee_vs_m, "fig5_ee_vs_m"},
    {Preset::fig6_per_antenna_power, "fig6_per_antenna_power"},
    {Preset::fig7_ee_vs_m_k50, "fig7_ee_vs_m_k50"},
    {Preset::fig8_rate_vs_m, "fig8_rate_vs_m"},
    {Preset::custom, "custom"},
};

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

[[noreturn]] void bad_value(const std::string& key, const std::string& value, int line,
                            const char* expected) {
  throw ConfigError(where(line) + "bad value '" + value + "' for " + key + " (expected " +
                    expected + ")");
}

double to_double(const std::string& key, const std::string& v, int line, bool allow_inf = false) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || std::isnan(x)) bad_value(key, v, line, "a number");
  if (std::isinf(x) && !(allow_inf && x > 0)) {
    bad_value(key, v, line, allow_inf ? "a number or inf" : "a finite number");
  }
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& v, int line) {
  std::int64_t x = 0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) bad_value(key, v, line, "an integer");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v, int line) {
  std::uint64_t x = 0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) bad_value(key, v, line, "a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  bad_value(key, v, line, "true or false");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v, int line) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t comma = std::min(v.find(',', pos), v.size());
    std::string item = v.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    const std::int64_t x = to_int(key, item, line);
    if (x < 1 || x > 1'000'000) bad_value(key, v, line, "positive user counts");
    out.push_back(static_cast<int>(x));
    pos = comma + 1;
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&, const std::string&, int)>;
using Getter = std::function<std::string(const ExperimentSpec&)>;

struct KeyInfo {
  const char* help;
  Setter set;
  Getter get;
};

// Plain double field of ExperimentSpec.
template <class F>
KeyInfo number(const char* help, F field, bool allow_inf = false) {
  return {help,
          [field, allow_inf](ExperimentSpec& s, const std::string& k, const std::string& v,
                             int line) { field(s) = to_double(k, v, line, allow_inf); },
          [field](const ExperimentSpec& s) {
            return format_number(field(s));
          }};
}

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table = [] {
    std::map<std::string, KeyInfo> t;
    t["preset"] = {"experiment preset (see list below)", nullptr,
                   [](const ExperimentSpec& s) { return std::string(to_string(s.preset)); }};
    t["users"] = {"user count K, or a comma list for one column group per K",
                  [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                    s.users = to_int_list(k, v, line);
                  },
                  [](const ExperimentSpec& s) { return join_ints(s.users); }};
    t["antennas"] = {"BS antenna count M when the sweep is not over M",
                     [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                       s.antennas = to_int(k, v, line);
                     },
                     [](const ExperimentSpec& s) { return std::to_string(s.antennas); }};
    t["sweep"] = {"sweep variable: M, K, xi or p_dl",
                  [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                    if (v != "M" && v != "K" && v != "xi" && v != "p_dl") {
                      bad_value(k, v, line, "M, K, xi or p_dl");
                    }
                    s.axis.name = v;
                  },
                  [](const ExperimentSpec& s) { return s.axis.name; }};
    t["start"] = number("first sweep value (axis units)",
                        [](auto& s) -> auto& { return s.axis.start; });
    t["stop"] = number("last sweep value (axis units)",
                       [](auto& s) -> auto& { return s.axis.stop; });
    t["points"] = {"number of sweep points, >= 2",
                   [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                     const std::int64_t n = to_int(k, v, line);
                     if (n < 0 || n > 10'000'000) bad_value(k, v, line, "a point count");
                     s.axis.points = static_cast<int>(n);
                   },
                   [](const ExperimentSpec& s) { return std::to_string(s.axis.points); }};
    t["scale"] = {"sweep spacing: linear or log",
                  [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                    if (v == "linear") {
                      s.axis.scale = AxisScale::linear;
                    } else if (v == "log") {
                      s.axis.scale = AxisScale::log;
                    } else {
                      bad_value(k, v, line, "linear or log");
                    }
                  },
                  [](const ExperimentSpec& s) {
                    return std::string(s.axis.scale == AxisScale::log ? "log" : "linear");
                  }};
    t["n_trials"] = {"Monte Carlo trials per sweep point",
                     [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                       s.n_trials = to_int(k, v, line);
                     },
                     [](const ExperimentSpec& s) { return std::to_string(s.n_trials); }};
    t["seed"] = {"Monte Carlo seed (64-bit)",
                 [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                   s.seed = to_uint(k, v, line);
                 },
                 [](const ExperimentSpec& s) { return std::to_string(s.seed); }};
    t["monte_carlo"] = {"add simulated columns where the preset has them: true or false",
                        [](ExperimentSpec& s, const std::string& k, const std::string& v,
                           int line) { s.monte_carlo = to_bool(k, v, line); },
                        [](const ExperimentSpec& s) {
                          return std::string(s.monte_carlo ? "true" : "false");
                        }};
    t["saturation_rule"] = {
        "transmit-power clamp at saturation: exact (M+K-1, default) or inset (M+K+1)",
        [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
          if (v == "exact") {
            s.selection.strict_saturation = true;
          } else if (v == "inset") {
            s.selection.strict_saturation = false;
          } else {
            bad_value(k, v, line, "exact or inset");
          }
        },
        [](const ExperimentSpec& s) {
          return std::string(s.selection.strict_saturation ? "exact" : "inset");
        }};

    t["r_min"] = number("inner radius of the user annulus, m",
                        [](auto& s) -> auto& { return s.scenario.geometry.r_min; });
    t["r_max"] = number("outer radius of the user annulus, m",
                        [](auto& s) -> auto& { return s.scenario.geometry.r_max; });
    t["path_exponent"] = number("path-loss exponent, > 2", [](auto& s) -> auto& {
      return s.scenario.geometry.path_exponent;
    });
    t["intercept"] = number("path-loss gain at 1 m", [](auto& s) -> auto& {
      return s.scenario.geometry.intercept;
    });
    t["theta_act"] = number("harvester activation threshold, W", [](auto& s) -> auto& {
      return s.scenario.harvester.theta_act;
    });
    t["theta_sat"] = number(
        "harvester saturation threshold, W (inf: never saturates)",
        [](auto& s) -> auto& { return s.scenario.harvester.theta_sat; }, true);
    t["eta_eh"] = number("rectifier efficiency", [](auto& s) -> auto& {
      return s.scenario.harvester.eta_eh;
    });
    t["eta_pa_eh"] = number("user PA efficiency", [](auto& s) -> auto& {
      return s.scenario.harvester.eta_pa_eh;
    });
    t["p_fix"] = number("fixed BS power, W",
                        [](auto& s) -> auto& { return s.scenario.power.p_fix; });
    t["p_bs"] = number("per-antenna circuit power, W",
                       [](auto& s) -> auto& { return s.scenario.power.p_bs; });
    t["kappa_bs"] = number("BS computational efficiency, flop/W",
                           [](auto& s) -> auto& { return s.scenario.power.kappa_bs; });
    t["eta_pa_bs"] = number("BS PA efficiency", [](auto& s) -> auto& {
      return s.scenario.power.eta_pa_bs;
    });
    t["p_dec"] = number("decoding power, W per bit/s",
                        [](auto& s) -> auto& { return s.scenario.power.p_dec; });
    t["coherence_symbols"] = number("coherence block length S, symbols",
                                    [](auto& s) -> auto& {
                                      return s.scenario.coherence_symbols;
                                    });
    t["bandwidth"] = number("system bandwidth B, Hz",
                            [](auto& s) -> auto& { return s.scenario.bandwidth; });
    t["sigma2"] = number("BS noise energy per symbol, J",
                         [](auto& s) -> auto& { return s.scenario.sigma2; });
    t["p_dl"] = number("BS transmit power, W",
                       [](auto& s) -> auto& { return s.scenario.transmit_power; });
    t["xi"] = number("share of harvested energy spent on pilots",
                     [](auto& s) -> auto& { return s.scenario.xi; });
    t["alpha_wet"] = {
        "energy-transfer share of the frame, or 'remainder'",
        [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
          if (v == "remainder") {
            s.scenario.split = FrameSplit::remainder;
          } else {
            s.scenario.split = FrameSplit::fixed_wet;
            s.scenario.alpha_wet = to_double(k, v, line);
          }
        },
        [](const ExperimentSpec& s) {
          return s.scenario.split == FrameSplit::remainder ? std::string("remainder")
                                                           : format_number(s.scenario.alpha_wet);
        }};
    t["alpha_wit"] = {"uplink share of the frame, or 'auto'",
                      [](ExperimentSpec& s, const std::string& k, const std::string& v, int line) {
                        if (v == "auto") {
                          s.scenario.alpha_wit.reset();
                        } else {
                          s.scenario.alpha_wit = to_double(k, v, line);
                        }
                      },
                      [](const ExperimentSpec& s) {
                        return s.scenario.alpha_wit ? format_number(*s.scenario.alpha_wit)
                                                    : std::string("auto");
                      }};
    t["pilot_length"] = {"pilot length tau in symbols, or 'auto' (tau = K)",
                         [](ExperimentSpec& s, const std::string& k, const std::string& v,
                            int line) {
                           if (v == "auto") {
                             s.scenario.pilot_length.reset();
                           } else {
                             const std::int64_t n = to_int(k, v, line);
                             if (n < 1 || n > 1'000'000'000) bad_value(k, v, line, "a length");
                             s.scenario.pilot_length = static_cast<int>(n);
                           }
                         },
                         [](const ExperimentSpec& s) {
                           return s.scenario.pilot_length
                                      ? std::to_string(*s.scenario.pilot_length)
                                      : std::string("auto");
                         }};
    return t;
  }();
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_rate_preset(Preset p) {
  return p == Preset::fig5_ee_vs_m || p == Preset::fig6_per_antenna_power ||
         p == Preset::fig7_ee_vs_m_k50 || p == Preset::fig8_rate_vs_m;
}

}  // namespace

const char* to_string(Preset p) {
  for (const auto& n : kPresetNames) {
    if (n.preset == p) return n.name;
  }
  return "unknown";
}

Preset parse_preset(std::string_view name) {
  for (const auto& n : kPresetNames) {
    if (name == n.name) return n.preset;
  }
  std::string msg = "unknown preset '" + std::string(name) + "'; valid presets:";
  for (const auto& n : kPresetNames) msg += std::string(" ") + n.name;
  throw ValidationError(msg);
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> v = [] {
    std::vector<Preset> out;
    for (const auto& n : kPresetNames) out.push_back(n.preset);
    return out;
  }();
  return v;
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    double v = 0.0;
    if (i == points - 1) {
      v = stop;
    } else if (scale == AxisScale::linear) {
      v = start + (stop - start) * i / (points - 1);
    } else {
      v = start * std::exp(std::log(stop / start) * i / (points - 1));
    }
    if (is_integer()) {
      v = std::round(v);
      if (!out.empty() && out.back() == v) continue;
    }
    out.push_back(v);
  }
  return out;
}

std::vector<int> ExperimentSpec::users_at(double axis_value) const {
  if (axis.name == "K") return {static_cast<int>(axis_value)};
  return users;
}

void ExperimentSpec::validate() const {
  scenario.validate();
  if (axis.points < 2) throw ValidationError("a sweep needs at least 2 points");
  if (!(axis.start < axis.stop)) throw ValidationError("sweep start must be below stop");
  if (axis.scale == AxisScale::log && !(axis.start > 0.0)) {
    throw ValidationError("log sweep needs a positive start");
  }
  if (users.empty()) throw ValidationError("need at least one user count");
  if (n_trials < 1) throw ValidationError("n_trials must be at least 1");
  if (axis.name == "M" && axis.start < 1.0) throw ValidationError("antenna sweep must start at 1 or more");
  if (axis.name == "K" && axis.start < 1.0) throw ValidationError("user sweep must start at 1 or more");
  if (axis.name == "xi" && !(axis.start > 0.0 && axis.stop < 1.0)) {
    throw ValidationError("xi sweep must stay inside (0, 1)");
  }
  if (axis.name == "p_dl" && !(axis.start > 0.0)) {
    throw ValidationError("transmit-power sweep must be positive");
  }
  if (axis.name != "M" && antennas < 1) throw ValidationError("antennas must be at least 1");

  int max_users = 0;
  const std::vector<double> grid = axis.values();
  for (double v : grid) {
    for (int k : users_at(v)) {
      max_users = std::max(max_users, k);
      scenario.frame(k);  // throws on an inconsistent split
    }
  }
  if (is_rate_preset(preset)) {
    const double m_min = axis.name == "M" ? grid.front() : static_cast<double>(antennas);
    if (!(m_min > max_users)) {
      throw ValidationError("rate and EE need more antennas than users (M > K)");
    }
    if (!scenario.alpha_wit && scenario.split == FrameSplit::remainder) {
      throw ValidationError("rate and EE need an uplink phase: set alpha_wet or alpha_wit");
    }
    if (!(scenario.sigma2 > 0.0)) throw ValidationError("rate and EE need sigma2 > 0");
  }
}

ExperimentSpec preset_spec(Preset p) {
  ExperimentSpec s;
  s.preset = p;
  switch (p) {
    case Preset::fig2_harvest_vs_m:
      s.scenario = wet_fixture();
      s.users = {1, 2};
      s.axis = {"M", 1, 2001, 21, AxisScale::linear};
      s.monte_carlo = true;
      break;
    case Preset::fig3_pte_vs_m:
      s.scenario = wet_fixture();
      s.users = {1, 40};
      s.axis = {"M", 1, 2000, 2000, AxisScale::linear};
      break;
    case Preset::fig4_xi_sweep:
      s.scenario = xi_sweep_fixture();
      s.users = {1, 2, 5, 10};
      s.antennas = 500;
      s.axis = {"xi", 0.001, 0.5, 50, AxisScale::log};
      break;
    case Preset::fig5_ee_vs_m:
    case Preset::fig6_per_antenna_power:
    case Preset::fig8_rate_vs_m:
      s.scenario = wit_fixture();
      s.users = {2};
      s.axis = {"M", 3, 10000, 60, AxisScale::log};
      break;
    case Preset::fig7_ee_vs_m_k50:
      s.scenario = wit_fixture();
      s.users = {50};
      s.axis = {"M", 51, 10000, 60, AxisScale::log};
      break;
    case Preset::custom:
      s.scenario = wit_fixture();
      s.users = {1};
      s.axis = {"M", 2, 100, 10, AxisScale::linear};
      break;
  }
  return s;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value,
                   int line) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(where(line) + "unknown key: " + key);
  if (!it->second.set) throw ConfigError(where(line) + key + " must be given before other keys");
  it->second.set(spec, key, value, line);
  spec.overrides.emplace_back(key, value);
}

ExperimentSpec parse_config(std::string_view text,
                            const std::vector<std::pair<std::string, std::string>>& settings) {
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries;
  std::vector<std::string> unknown;
  std::set<std::string> seen;
  const auto& table = key_table();

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + line +
                        "'");
    }
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (e.value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for " + e.key);
    }
    if (table.find(e.key) == table.end()) {
      unknown.push_back(e.key + " (line " + std::to_string(line_no) + ")");
      continue;
    }
    if (!seen.insert(e.key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + e.key);
    }
    entries.push_back(std::move(e));
  }
  for (const auto& [k, v] : settings) {
    if (table.find(k) == table.end()) unknown.push_back(k + " (--set)");
  }
  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& u : unknown) msg += " " + u;
    throw ConfigError(msg);
  }

  // The preset picks the base fixture, so it is applied before anything else.
  std::string preset_name = "custom";
  for (const auto& e : entries) {
    if (e.key == "preset") preset_name = e.value;
  }
  for (const auto& [k, v] : settings) {
    if (k == "preset") preset_name = v;
  }
  ExperimentSpec spec = preset_spec(parse_preset(preset_name));
  for (const auto& e : entries) {
    if (e.key != "preset") apply_setting(spec, e.key, e.value, e.line);
  }
  for (const auto& [k, v] : settings) {
    if (k != "preset") apply_setting(spec, k, v);
  }
  spec.validate();
  return spec;
}

std::string canonical_text(const ExperimentSpec& spec) {
  std::string out;
  for (const auto& [key, info] : key_table()) {
    out += key;
    out += '=';
    out += info.get(spec);
    out += '\n';
  }
  return out;
}

std::string config_reference() {
  std::string out;
  for (const auto& [key, info] : key_table()) {
    out += "  ";
    out += key;
    out.append(key.size() < 18 ? 18 - key.size() : 1, ' ');
    out += info.help;
    out += '\n';
  }
  out += "presets:";
  for (const auto& n : kPresetNames) out += std::string(" ") + n.name;
  out += '\n';
  return out;
}

}  // namespace wpt::experiments
