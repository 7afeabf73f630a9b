// SPDX-License-Identifier: Apache-2.0
//
// wptsim: batch runner for the wireless-power-transfer sweeps.
//
//   wptsim run --config cell.cfg --out fig5.csv --set users=2
//   wptsim compare --preset fig5_ee_vs_m --config /dev/null
//
// Exit status: 0 success, 1 invalid input, 2 runtime failure.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "wpt/errors.hpp"
#include "wpt/experiments/manifest.hpp"
#include "wpt/experiments/runner.hpp"
#include "wpt/experiments/spec.hpp"

namespace ex = wpt::experiments;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct Args {
  std::string config;
  std::string out;
  std::string preset;
  std::vector<std::string> sets;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

std::string read_config(const std::string& path) {
  if (path.empty()) return {};
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wpt::ValidationError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_workers_env() {
  const char* env = std::getenv("WPT_WORKERS");
  if (env == nullptr) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 4096) {
    throw wpt::ValidationError(std::string("WPT_WORKERS must be an integer in [1, 4096], got '") +
                               env + "'");
  }
}

ex::ExperimentSpec build_spec(const Args& a, const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> settings;
  for (const std::string& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw wpt::ValidationError("--set expects key=value, got '" + s + "'");
    }
    settings.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!a.preset.empty()) settings.emplace_back("preset", a.preset);
  if (sub.count("--trials") > 0) settings.emplace_back("n_trials", std::to_string(a.trials));
  if (sub.count("--seed") > 0) settings.emplace_back("seed", std::to_string(a.seed));
  if (a.config.empty() && a.preset.empty()) {
    throw wpt::ValidationError("give --config, --preset or both");
  }
  return ex::parse_config(read_config(a.config), settings);
}

int execute(const std::string& command, const Args& a, const CLI::App& sub) {
  check_workers_env();
  const ex::ExperimentSpec spec = build_spec(a, sub);
  const ex::Table table =
      command == "run" ? ex::run_experiment(spec) : ex::compare_optimizers(spec);
  if (a.out.empty()) {
    table.write_csv(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write to standard output failed");
    return kExitOk;
  }
  const std::string manifest = ex::manifest_json(spec, table, {command, ex::utc_timestamp()});
  ex::write_outputs(a.out, table, manifest);
  std::cerr << "wptsim: wrote " << table.rows.size() << " rows to " << a.out << "\n";
  return kExitOk;
}

void add_common(CLI::App& sub, Args& a) {
  sub.add_option("--config", a.config, "Config file of key=value lines ('-' for stdin)");
  sub.add_option("--out", a.out, "CSV output path; a manifest goes to <out>.manifest.json");
  sub.add_option("--trials", a.trials, "Monte Carlo trials per point (overrides n_trials)")
      ->check(CLI::PositiveNumber);
  sub.add_option("--seed", a.seed, "Monte Carlo seed (overrides seed)");
  sub.add_option("--preset", a.preset, "Preset name (overrides preset)");
  sub.add_option("--set", a.sets, "Extra key=value setting; repeatable")->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless power transfer in massive-MIMO cells: sweeps and optimizer checks"};
  app.require_subcommand(1);
  app.footer("Config keys (units fixed):\n" + ex::config_reference() +
             "\nWPT_WORKERS sets the worker-thread count; WPT_SIMD=scalar disables vector "
             "kernels.\nExit status: 0 success, 1 invalid input, 2 runtime failure.");

  Args run_args;
  Args cmp_args;
  CLI::App* run = app.add_subcommand("run", "Run a sweep and write one CSV row per point");
  CLI::App* cmp =
      app.add_subcommand("compare", "Compare closed-form optimizers with brute-force search");
  add_common(*run, run_args);
  add_common(*cmp, cmp_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const bool is_run = run->parsed();
  try {
    return execute(is_run ? "run" : "compare", is_run ? run_args : cmp_args,
                   is_run ? *run : *cmp);
  } catch (const wpt::ValidationError& e) {
    std::cerr << "wptsim: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const wpt::DomainError& e) {
    std::cerr << "wptsim: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "wptsim: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
