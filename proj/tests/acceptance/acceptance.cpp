// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only 3,9] [--expect-fail 6,7]
//
// Criteria listed in --expect-fail still print FAIL, but only an unexpected
// FAIL or an unexpected pass (XPASS) makes the exit status nonzero.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "random_cells.hpp"
#include "wpt/experiments/runner.hpp"
#include "wpt/experiments/spec.hpp"
#include "wpt/mc_oracle.hpp"
#include "wpt/model_core.hpp"
#include "wpt/power_pte.hpp"
#include "wpt/rate_ee.hpp"
#include "wpt/scenario.hpp"

using namespace wpt;
namespace ex = wpt::experiments;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <class... T>
std::string cat(const T&... parts) {
  std::ostringstream ss;
  (ss << ... << parts);
  return ss.str();
}

// 1: perfect-CSI received energy, Monte Carlo against closed form.
Outcome oracle_equivalence() {
  constexpr int kCells = 20;
  constexpr std::int64_t kTrials = 100000;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int within = 0;
  double worst_z = 0.0;
  double worst_any_user = 0.0;
  for (int n = 0; n < kCells; ++n) {
    const SystemScenario s = testing::random_wet_cell(rng);
    const int k = 1 + static_cast<int>(rng() % 8);
    const AntennaCount m = 1 + static_cast<AntennaCount>(rng() % 64);
    DownlinkConfig cfg = s.downlink(m, k);
    std::vector<double> beta(static_cast<std::size_t>(k));
    double zsum = 0.0;
    for (int i = 0; i < k; ++i) {
      beta[static_cast<std::size_t>(i)] = s.beta() * testing::log_uniform(rng, 0.2, 5.0);
      cfg.zeta[static_cast<std::size_t>(i)] = 0.2 + u(rng);
      zsum += cfg.zeta[static_cast<std::size_t>(i)];
    }
    for (double& z : cfg.zeta) z /= zsum;
    const FrameConfig frame = s.frame(k);
    const McScenario sc = make_mc_scenario(cfg, frame, s.harvester, beta, Estimator::perfect);
    const std::vector<TrialStats> st = estimate_received_energy(kTrials, 7000 + n, sc);
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double want = received_energy_perfect(cfg, frame, beta[ui], i);
      const double z = std::fabs(st[ui].mean_incident - want) / st[ui].std_err;
      worst_any_user = std::max(worst_any_user, z);
      if (i == 0) {
        worst_z = std::max(worst_z, z);
        if (z <= 3.0) ++within;
      }
    }
  }
  return {within == kCells,
          cat(within, "/", kCells, " cells within 3 SE, worst |z| ", fmt("%.2f", worst_z),
              " (user 0), ", fmt("%.2f", worst_any_user), " over all users")};
}

// 2: estimated-CSI incident energy solves its own fixed-point relation.
Outcome fixed_point_certificate() {
  std::mt19937_64 rng(2002);
  int checked = 0;
  int draws = 0;
  double worst = 0.0;
  while (checked < 100 && draws < 100000) {
    ++draws;
    SystemScenario s = testing::random_wet_cell(rng);
    s.xi = testing::log_uniform(rng, 1e-4, 0.5);
    const int k = 1 + static_cast<int>(rng() % 16);
    const AntennaCount m = 1 + static_cast<AntennaCount>(rng() % 4000);
    const DownlinkConfig cfg = s.downlink(m, k);
    const FrameConfig frame = s.frame(k);
    const ImperfectIncident inc = received_energy_imperfect(cfg, frame, s.harvester, s.beta(), 0);
    if (inc.branch != HarvestMode::linear) continue;
    const ImperfectCsiTerms t = imperfect_csi_terms(cfg, frame, s.harvester, s.beta(), 0);
    const double md = static_cast<double>(m);
    const double g = inc.psi_act;
    const double rhs = t.a1 * md * (1.0 - ((md - 1.0) / md) / (1.0 + g / t.a3)) + t.a2;
    worst = std::max(worst, std::fabs(g - rhs) / g);
    ++checked;
  }
  return {checked == 100 && worst < 1e-9,
          cat(checked, " linear-mode cells, worst relative residual ", fmt("%.2e", worst),
              " (< 1e-9)")};
}

// 3: LS and MMSE estimates steer the same energy on every draw.
Outcome ls_mmse_equivalence() {
  const SystemScenario s = wet_fixture();
  const McScenario sc = make_mc_scenario(s, 64, 2, Estimator::ls);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const ChannelRealization r = draw_realization(3003, t, sc);
    const std::vector<double> a = received_energies(r.g, r.g_hat_ls, sc);
    const std::vector<double> b = received_energies(r.g, r.g_hat_mmse, sc);
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::fabs(a[i] - b[i]) / a[i]);
    }
  }
  return {worst < 1e-10,
          cat("1e4 draws at M=64 K=2, worst relative difference ", fmt("%.2e", worst),
              " (< 1e-10)")};
}

// 4: K = 1 harvested power saturates at eta_eh * theta_sat.
Outcome saturation_plateau() {
  const SystemScenario s = wet_fixture();
  const FrameConfig frame = s.frame(1);
  const AntennaThresholds thr =
      antenna_thresholds_perfect(s.downlink(1, 1), frame, s.harvester, s.beta(), 0);
  const double plateau = s.harvester.eta_eh * s.harvester.theta_sat;
  double worst_plateau = 0.0;
  bool below_ok = true;
  for (AntennaCount m = 1; m <= 2001; ++m) {
    const EnergyReport r = harvested_perfect(s.downlink(m, 1), frame, s.harvester, s.beta(), 0);
    const double watts = r.harvested * s.bandwidth;
    if (m >= thr.m_sat) {
      worst_plateau = std::max(worst_plateau, std::fabs(watts - plateau) / plateau);
    } else if (!(watts < plateau)) {
      below_ok = false;
    }
  }
  const double m_sat_err = std::fabs(static_cast<double>(thr.m_sat) - 1089.0) / 1089.0;
  return {worst_plateau < 1e-12 && below_ok && m_sat_err <= 0.01,
          cat("plateau ", fmt("%.6g", plateau), " W (max deviation ", fmt("%.1e", worst_plateau),
              "), m_sat ", thr.m_sat, " vs 1089 +/- 1%")};
}

// 5: closed-form PTE optima tie exhaustive sweeps.
Outcome pte_optimizers() {
  std::mt19937_64 rng(5005);
  int m_cells = 0;
  int m_match = 0;
  int k_cells = 0;
  int k_match = 0;
  int draws = 0;
  std::string first_miss;
  while (m_cells < 100 && draws < 100000) {
    ++draws;
    const SystemScenario s = testing::random_wet_cell(rng);
    const int k = 1 + static_cast<int>(rng() % 24);
    const AntennaCount hi = pte_sweep_limit_m(s, k);
    if (hi > 512) continue;
    ++m_cells;
    const AntennaCount closed = pte_optimal_m(s, k);
    const AntennaCount swept = pte_sweep_optimal_m(s, k, hi);
    if (closed == swept) {
      ++m_match;
    } else if (first_miss.empty()) {
      first_miss = cat(" first miss: M ", closed, " vs ", swept);
    }
  }
  while (k_cells < 100) {
    const SystemScenario s = testing::random_wet_cell(rng);
    const AntennaCount m = 2 + static_cast<AntennaCount>(rng() % 511);
    const int hi = pte_sweep_limit_k(s, m);
    const int closed = pte_optimal_k(s, m);
    const int swept = pte_sweep_optimal_k(s, m, hi);
    ++k_cells;
    if (closed == swept) {
      ++k_match;
    } else if (first_miss.empty()) {
      first_miss = cat(" first miss: K ", closed, " vs ", swept);
    }
  }
  return {m_cells == 100 && m_match == 100 && k_match == 100,
          cat("antenna optimum ", m_match, "/", m_cells, ", user optimum ", k_match, "/",
              k_cells, first_miss)};
}

// 6: PTE-optimal antenna counts on the energy-transfer fixture.
Outcome pte_reproduction() {
  const SystemScenario s = wet_fixture();
  auto thresholds = [&](int k) {
    return antenna_thresholds_perfect(s.downlink(1, k), s.frame(k), s.harvester, s.beta(), 0);
  };
  const AntennaThresholds t1 = thresholds(1);
  const AntennaThresholds t40 = thresholds(40);
  const AntennaCount opt1 = pte_sweep_optimal_m(s, 1, pte_sweep_limit_m(s, 1));
  const AntennaCount opt40 = pte_sweep_optimal_m(s, 40, pte_sweep_limit_m(s, 40));
  const double pte_at_sat = pte(s, t1.m_sat, 1).pte;
  const double pte_before = pte(s, t1.m_sat - 1, 1).pte;
  return {opt1 == t1.m_sat && opt40 == t40.m_act,
          cat("K=1 optimum ", opt1, " (m_sat ", t1.m_sat, ", PTE ", fmt("%.10g", pte_before),
              " at m_sat-1 vs ", fmt("%.10g", pte_at_sat), " at m_sat); K=40 optimum ", opt40,
              " (m_act ", t40.m_act, ")")};
}

// 7: effective harvested power over the pilot share.
Outcome xi_sweep() {
  const ex::ExperimentSpec spec = ex::preset_spec(ex::Preset::fig4_xi_sweep);
  const ex::Table t = ex::run_experiment(spec);
  const std::vector<double> grid = spec.axis.values();
  std::vector<int> idx;
  std::string where;
  bool in_window = true;
  for (int k : spec.users) {
    const std::size_t col = t.column_index("is_argmax_k" + std::to_string(k));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (std::get<std::int64_t>(t.rows[r][col]) == 1) {
        idx.push_back(static_cast<int>(r));
        const double x = grid[r];
        if (x < 0.005 || x > 0.02) in_window = false;
        where += cat(" K=", k, ":", fmt("%.4f", x), "[", r, "]");
      }
    }
  }
  const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end());
  const int spread = idx.size() == spec.users.size() ? *hi - *lo : -1;
  return {in_window && spread >= 0 && spread <= 1,
          cat("argmax xi [grid index]", where, "; window [0.005, 0.02] ",
              in_window ? "held" : "missed", ", index spread ", spread, " (<= 1)")};
}

// 8: EE-optimal antenna count under the selected transmit power.
Outcome ee_optimum_location() {
  const SystemScenario s = wit_fixture();
  auto argmax = [&](int k, AntennaCount step) {
    AntennaCount best = 0;
    double best_ee = -1.0;
    for (AntennaCount m = k + 1; m <= 10000; m += step) {
      const double e = ee(s, m, k, algorithm1_select_pdl(s, m, k)).ee;
      if (e > best_ee) {
        best_ee = e;
        best = m;
      }
    }
    return best;
  };
  const AntennaCount a2 = argmax(2, 1);
  const AntennaCount a50 = argmax(50, 2);
  const bool ok = std::llabs(a2 - 56) <= 5 && std::llabs(a50 - 230) <= 20;
  return {ok, cat("K=2 argmax ", a2, " (56 +/- 5), K=50 argmax ", a50, " (230 +/- 20)")};
}

// 9: Lambert-W power against golden-section search in linear mode.
Outcome lambert_optimum() {
  const SystemScenario s = wit_fixture();
  int compared = 0;
  double worst = 0.0;
  for (int k : {2, 50}) {
    for (AntennaCount m = k + 1; m <= 10000; ++m) {
      const PowerInterval iv = linear_mode_interval(s, m, k);
      const double p = ee_optimal_pdl(s, m, k);
      if (!(p > iv.lo && p < iv.hi)) continue;
      const double e = ee(s, m, k, p).ee;
      const PowerSearch g = ee_golden_linear(s, m, k);
      worst = std::max(worst, (g.ee - e) / g.ee);
      ++compared;
    }
  }
  return {compared > 0 && worst <= 1e-4,
          cat(compared, " linear-mode (K, M) points, worst relative shortfall ",
              fmt("%.2e", worst), " (<= 1e-4)")};
}

// 10: selected power against the naive power and the exhaustive grid.
Outcome algorithm1_quality() {
  const SystemScenario s = wit_fixture();
  int points = 0;
  int naive_losses = 0;
  double worst_gap = -kInfinity;
  for (int k : {2, 50}) {
    for (AntennaCount m = k + 1; m <= 10000; m += (m < 1000 ? 1 : 10)) {
      const PowerSelection sel = select_pdl(s, m, k);
      const double e_alg = ee(s, m, k, sel.selected).ee;
      const double e_naive = ee(s, m, k, sel.candidate).ee;
      const PowerSearch grid = ee_reference_grid(s, m, k);
      if (e_alg < e_naive) ++naive_losses;
      worst_gap = std::max(worst_gap, (grid.ee - e_alg) / grid.ee);
      ++points;
    }
  }
  return {naive_losses == 0 && worst_gap <= 0.02,
          cat(points, " (K, M) points, below naive ", naive_losses,
              " times, worst gap to grid ", fmt("%.2e", worst_gap), " (<= 0.02)")};
}

// 11: rate monotone in M; SNR doubling ratio above 2 when linear, tending
// to 2 when saturated.
Outcome rate_growth() {
  const SystemScenario fixture = wit_fixture();
  int drops = 0;
  for (int k : {2, 50}) {
    double prev = -1.0;
    for (AntennaCount m = k + 1; m <= 10000; ++m) {
      const double r = uplink_rate(fixture, m, k, algorithm1_select_pdl(fixture, m, k)).sum_rate;
      if (r < prev) ++drops;
      prev = r;
    }
    for (double p : {0.5, 18.0, 500.0}) {
      prev = -1.0;
      for (AntennaCount m = k + 1; m <= 10000; ++m) {
        const double r = uplink_rate(fixture, m, k, p).sum_rate;
        if (r < prev) ++drops;
        prev = r;
      }
    }
  }

  // Harvesters that never saturate, and ones that saturate at any M.
  SystemScenario lin = fixture;
  lin.harvester = HarvesterSpec::ideal(fixture.harvester.eta_eh, fixture.harvester.eta_pa_eh);
  SystemScenario sat = fixture;
  sat.harvester.theta_act = 1e-10;
  sat.harvester.theta_sat = 1e-9;
  double min_linear = kInfinity;
  double last_sat = 0.0;
  double worst_sat_model = 0.0;
  bool sat_mode = true;
  bool sat_decreasing = true;
  for (int k : {1, 2, 10, 50}) {
    double prev_sat = kInfinity;
    for (AntennaCount m = 4 * k; m <= 8000; m *= 2) {
      min_linear = std::min(min_linear, uplink_rate(lin, 2 * m, k, 18.0).snr_effective /
                                            uplink_rate(lin, m, k, 18.0).snr_effective);
      const RateReport a = uplink_rate(sat, m, k, 18.0);
      const RateReport b = uplink_rate(sat, 2 * m, k, 18.0);
      sat_mode = sat_mode && a.mode == HarvestMode::saturated && b.mode == HarvestMode::saturated;
      const double rs = b.snr_effective / a.snr_effective;
      const double model = (2.0 * m - k) / static_cast<double>(m - k);
      worst_sat_model = std::max(worst_sat_model, std::fabs(rs - model) / model);
      if (rs > prev_sat) sat_decreasing = false;
      prev_sat = rs;
    }
    last_sat = std::max(last_sat, prev_sat);
  }
  const bool ok = drops == 0 && min_linear > 2.0 && sat_mode && sat_decreasing &&
                  worst_sat_model < 1e-12 && last_sat > 2.0 && last_sat < 2.02;
  return {ok, cat("rate drops ", drops, "; linear doubling ratio >= ", fmt("%.4f", min_linear),
                  "; saturated ratio falls to ", fmt("%.5f", last_sat),
                  " at the largest M (model (2M-K)/(M-K), deviation ",
                  fmt("%.1e", worst_sat_model), ")")};
}

// 12: EE vanishes for very large arrays.
Outcome vanishing_ee() {
  const SystemScenario s = wit_fixture();
  bool ok = true;
  std::string detail;
  for (int k : {2, 50}) {
    auto at = [&](AntennaCount m) { return ee(s, m, k, algorithm1_select_pdl(s, m, k)).ee; };
    double peak = 0.0;
    for (AntennaCount m = k + 1; m <= 10000; ++m) peak = std::max(peak, at(m));
    const double e5 = at(100000);
    bool decreasing = true;
    double prev = kInfinity;
    for (int i = 0; i < 5; ++i) {
      const auto m = static_cast<AntennaCount>(std::llround(std::pow(10.0, 4.0 + i / 4.0)));
      const double e = at(m);
      if (!(e < prev)) decreasing = false;
      prev = e;
    }
    ok = ok && e5 < peak && decreasing;
    detail += cat(detail.empty() ? "" : "; ", "K=", k, " EE(1e5)/peak ", fmt("%.3f", e5 / peak),
                  decreasing ? ", decreasing" : ", not decreasing", " over [1e4, 1e5]");
  }
  return {ok, detail};
}

// 13: byte-identical reruns for every preset, with different worker counts.
Outcome determinism() {
  int identical = 0;
  std::string differing;
  for (ex::Preset p : ex::all_presets()) {
    std::vector<std::pair<std::string, std::string>> settings{{"preset", ex::to_string(p)},
                                                              {"seed", "13"}};
    if (p == ex::Preset::fig2_harvest_vs_m) settings.emplace_back("n_trials", "500");
    if (p == ex::Preset::custom) settings.emplace_back("monte_carlo", "true");
    const ex::ExperimentSpec spec = ex::parse_config("", settings);
    std::ostringstream a;
    std::ostringstream b;
    ex::run_experiment(spec, {1}).write_csv(a);
    ex::run_experiment(spec, {3}).write_csv(b);
    if (a.str() == b.str() && !a.str().empty()) {
      ++identical;
    } else {
      differing += cat(" ", ex::to_string(p));
    }
  }
  const auto n = static_cast<int>(ex::all_presets().size());
  return {identical == n, cat(identical, "/", n, " presets byte-identical across reruns",
                              differing.empty() ? "" : "; differing:" + differing)};
}

std::set<int> parse_ids(const std::string& list) {
  std::set<int> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) ids.insert(std::stoi(item));
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string only;
  std::string expect_fail;
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--expect-fail", expect_fail, "Comma-separated criteria known to fail");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> run_ids = parse_ids(only);
  const std::set<int> known = parse_ids(expect_fail);

  const std::vector<Criterion> criteria{
      {1, "Monte Carlo matches closed-form received energy", 120.0, oracle_equivalence},
      {2, "fixed-point certificate for estimated CSI", 1.0, fixed_point_certificate},
      {3, "LS and MMSE per-draw equivalence", 0.0, ls_mmse_equivalence},
      {4, "saturation plateau at 0.5 mW", 0.0, saturation_plateau},
      {5, "PTE optimizers tie brute force", 60.0, pte_optimizers},
      {6, "PTE optima at m_sat (K=1) and m_act (K=40)", 0.0, pte_reproduction},
      {7, "pilot-share argmax location and stability", 0.0, xi_sweep},
      {8, "EE-optimal antenna count", 30.0, ee_optimum_location},
      {9, "Lambert-W power matches golden section", 0.0, lambert_optimum},
      {10, "selected power quality", 0.0, algorithm1_quality},
      {11, "rate growth contrast", 0.0, rate_growth},
      {12, "vanishing EE", 0.0, vanishing_ee},
      {13, "deterministic reruns", 0.0, determinism},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!run_ids.empty() && run_ids.count(c.id) == 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, cat("threw: ", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" (budget %.0f s)", c.budget_s);
      if (secs > c.budget_s) {
        o.pass = false;
        timing += " over budget";
      }
    }
    const bool expected_fail = known.count(c.id) > 0;
    const char* tag = o.pass ? (expected_fail ? "XPASS" : "PASS") : "FAIL";
    std::printf("%-5s %2d %s: %s; %s%s\n", tag, c.id, c.title, o.detail.c_str(), timing.c_str(),
                !o.pass && expected_fail ? " [known failure]" : "");
    std::fflush(stdout);
    if (o.pass == expected_fail) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
