// SPDX-License-Identifier: Apache-2.0
#include "wpt/experiments/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "wpt/experiments/format.hpp"
#include "wpt/mc_oracle.hpp"
#include "wpt/power_pte.hpp"

namespace wpt::experiments {

namespace {

constexpr double kLambertTolerance = 1e-4;
constexpr double kGridTolerance = 0.02;

int rank(Provenance p) {
  switch (p) {
    case Provenance::input: return 0;
    case Provenance::analytic: return 1;
    case Provenance::optimizer: return 2;
    case Provenance::monte_carlo: return 3;
  }
  return 0;
}

std::string cell_text(const Cell& c) {
  switch (c.index()) {
    case 1: return format_number(std::get<double>(c));
    case 2: return format_number(std::get<std::int64_t>(c));
    case 3: return csv_field(std::get<std::string>(c));
    default: return {};
  }
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || stop.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int resolve(const RunOptions& opt) { return opt.workers > 0 ? opt.workers : default_workers(); }

// The cell at one sweep point for one user count.
struct Point {
  SystemScenario s;
  AntennaCount m = 1;
  int k = 1;
};

Point make_point(const ExperimentSpec& spec, double v, int k) {
  Point p{spec.scenario, spec.antennas, k};
  if (spec.axis.name == "M") {
    p.m = static_cast<AntennaCount>(v);
  } else if (spec.axis.name == "xi") {
    p.s.xi = v;
  } else if (spec.axis.name == "p_dl") {
    p.s.transmit_power = v;
  }
  return p;
}

SystemScenario ideal_of(const SystemScenario& s) {
  SystemScenario id = s;
  id.harvester = HarvesterSpec::ideal(s.harvester.eta_eh, s.harvester.eta_pa_eh);
  return id;
}

double harvested_w(const Point& p, CsiModel csi) {
  const DownlinkConfig cfg = p.s.downlink(p.m, p.k);
  const FrameConfig f = p.s.frame(p.k);
  const EnergyReport e = csi == CsiModel::perfect
                             ? harvested_perfect(cfg, f, p.s.harvester, p.s.beta(), 0)
                             : harvested_imperfect(cfg, f, p.s.harvester, p.s.beta(), 0);
  return f.bandwidth * e.harvested;
}

// One group of columns repeated for every user count.
struct Group {
  std::vector<Column> columns;
  std::function<std::vector<Cell>(const Point&)> eval;
};

void add_mc_columns(Group& g, const ExperimentSpec& spec) {
  for (const char* name : {"mc_perfect_w", "mc_perfect_se_w", "mc_ls_w", "mc_ls_se_w"}) {
    g.columns.push_back({name, Provenance::monte_carlo});
  }
  auto inner = g.eval;
  g.eval = [inner, &spec](const Point& p) {
    std::vector<Cell> cells = inner(p);
    for (Estimator e : {Estimator::perfect, Estimator::ls}) {
      const McScenario sc = make_mc_scenario(p.s, p.m, p.k, e);
      const TrialStats st = estimate_harvested_energy(spec.n_trials, spec.seed, sc,
                                                      p.s.harvester, p.s.bandwidth, {1})[0];
      cells.emplace_back(st.harvested_power);
      cells.emplace_back(p.s.bandwidth * st.harvested_std_err);
    }
    return cells;
  };
}

struct PowerChoice {
  double p_ideal;
  double ee_ideal;
  double ee_naive;
  double p_alg;
  EeReport alg;
  PowerSearch grid;
};

PowerChoice choose_powers(const ExperimentSpec& spec, const Point& p) {
  const SystemScenario id = ideal_of(p.s);
  PowerChoice c{};
  c.p_ideal = ee_optimal_pdl(id, p.m, p.k);
  c.ee_ideal = ee(id, p.m, p.k, c.p_ideal).ee;
  c.ee_naive = ee(p.s, p.m, p.k, c.p_ideal).ee;
  c.p_alg = algorithm1_select_pdl(p.s, p.m, p.k, spec.selection);
  c.alg = ee(p.s, p.m, p.k, c.p_alg);
  c.grid = ee_reference_grid(p.s, p.m, p.k, spec.selection);
  return c;
}

Group group_for(const ExperimentSpec& spec) {
  Group g;
  auto col = [&g](const char* name, Provenance prov = Provenance::analytic) {
    g.columns.push_back({name, prov});
  };
  switch (spec.preset) {
    case Preset::fig2_harvest_vs_m:
      col("harvested_perfect_w");
      col("harvested_estimated_w");
      col("mode");
      g.eval = [](const Point& p) -> std::vector<Cell> {
        const EnergyReport e = harvested_perfect(p.s.downlink(p.m, p.k), p.s.frame(p.k),
                                                 p.s.harvester, p.s.beta(), 0);
        return {p.s.bandwidth * e.harvested, harvested_w(p, CsiModel::estimated),
                std::string(to_string(e.mode))};
      };
      if (spec.monte_carlo) add_mc_columns(g, spec);
      break;

    case Preset::fig3_pte_vs_m:
      col("pte_perfect");
      col("pte_estimated");
      col("mode");
      col("is_optimum", Provenance::optimizer);
      g.eval = [](const Point& p) -> std::vector<Cell> {
        const PteReport a = pte(p.s, p.m, p.k, CsiModel::perfect);
        const PteReport b = pte(p.s, p.m, p.k, CsiModel::estimated);
        const AntennaCount best = pte_optimal_m(p.s, p.k);
        return {a.pte, b.pte, std::string(to_string(a.mode)),
                std::int64_t{p.m == best ? 1 : 0}};
      };
      break;

    case Preset::fig4_xi_sweep:
      col("effective_harvested_w");
      col("is_argmax", Provenance::optimizer);
      g.eval = [](const Point& p) -> std::vector<Cell> {
        return {(1.0 - p.s.xi) * harvested_w(p, CsiModel::estimated), std::int64_t{0}};
      };
      break;

    case Preset::fig5_ee_vs_m:
    case Preset::fig7_ee_vs_m_k50:
      for (const char* n : {"ee_ideal", "ee_practical_naive", "ee_algorithm1", "ee_exhaustive",
                            "p_ideal_w", "p_algorithm1_w", "p_exhaustive_w"}) {
        col(n, Provenance::optimizer);
      }
      g.eval = [&spec](const Point& p) -> std::vector<Cell> {
        const PowerChoice c = choose_powers(spec, p);
        return {c.ee_ideal, c.ee_naive, c.alg.ee, c.grid.ee, c.p_ideal, c.p_alg, c.grid.p_dl};
      };
      break;

    case Preset::fig6_per_antenna_power:
      for (const char* n : {"p_ideal_per_antenna_w", "p_algorithm1_per_antenna_w",
                            "p_exhaustive_per_antenna_w"}) {
        col(n, Provenance::optimizer);
      }
      g.eval = [&spec](const Point& p) -> std::vector<Cell> {
        const PowerChoice c = choose_powers(spec, p);
        const double m = static_cast<double>(p.m);
        return {c.p_ideal / m, c.p_alg / m, c.grid.p_dl / m};
      };
      break;

    case Preset::fig8_rate_vs_m:
      for (const char* n : {"sum_rate_ideal", "sum_rate_algorithm1", "sum_rate_exhaustive"}) {
        col(n, Provenance::optimizer);
      }
      col("mode_algorithm1", Provenance::optimizer);
      g.eval = [&spec](const Point& p) -> std::vector<Cell> {
        const PowerChoice c = choose_powers(spec, p);
        const double ideal = ee(ideal_of(p.s), p.m, p.k, c.p_ideal).sum_rate;
        return {ideal, c.alg.sum_rate, ee(p.s, p.m, p.k, c.grid.p_dl).sum_rate,
                std::string(to_string(c.alg.mode))};
      };
      break;

    case Preset::custom: {
      col("incident_perfect_j");
      col("harvested_perfect_w");
      col("harvested_estimated_w");
      col("mode");
      col("pte");
      col("sum_rate");
      col("ee");
      g.eval = [](const Point& p) -> std::vector<Cell> {
        const DownlinkConfig cfg = p.s.downlink(p.m, p.k);
        const FrameConfig f = p.s.frame(p.k);
        const EnergyReport e = harvested_perfect(cfg, f, p.s.harvester, p.s.beta(), 0);
        std::vector<Cell> cells{e.incident, f.bandwidth * e.harvested,
                                harvested_w(p, CsiModel::estimated),
                                std::string(to_string(e.mode)), pte(p.s, p.m, p.k).pte};
        // Rate needs an uplink phase, noise and more antennas than users.
        if (f.alpha_wit > 0.0 && f.sigma2 > 0.0 && p.m > p.k) {
          const EeReport r = ee(p.s, p.m, p.k, p.s.transmit_power);
          cells.emplace_back(r.sum_rate);
          cells.emplace_back(r.ee);
        } else {
          cells.emplace_back();
          cells.emplace_back();
        }
        return cells;
      };
      if (spec.monte_carlo) add_mc_columns(g, spec);
      break;
    }
  }
  return g;
}

std::string axis_column(const ExperimentSpec& spec) {
  return spec.axis.name == "p_dl" ? "p_dl_w" : spec.axis.name;
}

Cell axis_cell(const ExperimentSpec& spec, double v) {
  if (spec.axis.is_integer()) return static_cast<std::int64_t>(v);
  return v;
}

// Marks the largest value of `value_col` with 1 in `flag_col`.
void flag_argmax(Table& t, std::size_t value_col, std::size_t flag_col) {
  std::size_t best = t.rows.size();
  double best_v = -kInfinity;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = std::get<double>(t.rows[r][value_col]);
    if (v > best_v) {
      best_v = v;
      best = r;
    }
  }
  if (best < t.rows.size()) t.rows[best][flag_col] = std::int64_t{1};
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::input: return "input";
    case Provenance::analytic: return "analytic";
    case Provenance::optimizer: return "optimizer";
    case Provenance::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

Provenance Table::row_provenance(std::size_t row) const {
  Provenance best = Provenance::analytic;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (rows[row][c].index() == 0) continue;
    if (rank(columns[c].provenance) > rank(best)) best = columns[c].provenance;
  }
  return best;
}

void Table::write_csv(std::ostream& out) const {
  for (const Column& c : columns) out << csv_field(c.name) << ',';
  out << "provenance\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << cell_text(rows[r][c]) << ',';
    out << to_string(row_provenance(r)) << '\n';
  }
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw InternalError("no column named " + name);
}

Table run_experiment(const ExperimentSpec& spec, RunOptions opt) {
  spec.validate();
  const std::vector<double> grid = spec.axis.values();
  const Group g = group_for(spec);
  const bool per_k = spec.axis.name == "K";
  const std::vector<int> ks = per_k ? std::vector<int>{0} : spec.users;
  const bool suffix = !per_k && ks.size() > 1;

  Table t;
  t.columns.push_back({axis_column(spec), Provenance::input});
  for (int k : ks) {
    for (const Column& c : g.columns) {
      t.columns.push_back({suffix ? c.name + "_k" + std::to_string(k) : c.name, c.provenance});
    }
  }

  t.rows.resize(grid.size());
  parallel_for(grid.size(), resolve(opt), [&](std::size_t i) {
    const double v = grid[i];
    std::vector<Cell> row{axis_cell(spec, v)};
    for (int k : spec.users_at(v)) {
      const std::vector<Cell> cells = g.eval(make_point(spec, v, k));
      row.insert(row.end(), cells.begin(), cells.end());
    }
    t.rows[i] = std::move(row);
  });

  if (spec.preset == Preset::fig4_xi_sweep) {
    for (int k : ks) {
      const std::string sfx = suffix ? "_k" + std::to_string(k) : "";
      flag_argmax(t, t.column_index("effective_harvested_w" + sfx),
                  t.column_index("is_argmax" + sfx));
    }
  }
  return t;
}

Table compare_optimizers(const ExperimentSpec& spec, RunOptions opt) {
  spec.validate();
  Table t;
  t.columns = {{"target", Provenance::input},
               {"users", Provenance::input},
               {"antennas", Provenance::input},
               {"closed_form_arg", Provenance::optimizer},
               {"brute_force_arg", Provenance::optimizer},
               {"closed_form_value", Provenance::optimizer},
               {"brute_force_value", Provenance::optimizer},
               {"relative_gap", Provenance::optimizer},
               {"tolerance", Provenance::input},
               {"pass", Provenance::optimizer}};

  auto gap_row = [](const char* target, int k, AntennaCount m, double arg_c, double arg_b,
                    double val_c, double val_b, double gap, double tol) {
    return std::vector<Cell>{std::string(target), std::int64_t{k}, std::int64_t{m}, arg_c, arg_b,
                             val_c, val_b, gap, tol, std::int64_t{gap <= tol ? 1 : 0}};
  };

  switch (spec.preset) {
    case Preset::fig3_pte_vs_m: {
      t.rows.resize(spec.users.size());
      parallel_for(spec.users.size(), resolve(opt), [&](std::size_t i) {
        const int k = spec.users[i];
        const SystemScenario& s = spec.scenario;
        const AntennaCount closed = pte_optimal_m(s, k);
        const AntennaCount brute = pte_sweep_optimal_m(s, k, pte_sweep_limit_m(s, k));
        const double vc = pte(s, closed, k).pte;
        const double vb = pte(s, brute, k).pte;
        auto row = gap_row("pte_antennas", k, closed, static_cast<double>(closed),
                           static_cast<double>(brute), vc, vb, std::fabs(vc - vb) / vb, 0.0);
        // The argmax itself has to agree, not just the value.
        row.back() = std::int64_t{closed == brute ? 1 : 0};
        t.rows[i] = std::move(row);
      });
      break;
    }
    case Preset::fig5_ee_vs_m:
    case Preset::fig6_per_antenna_power:
    case Preset::fig7_ee_vs_m_k50:
    case Preset::fig8_rate_vs_m: {
      std::vector<std::pair<AntennaCount, int>> jobs;
      for (double v : spec.axis.values()) {
        for (int k : spec.users_at(v)) jobs.emplace_back(make_point(spec, v, k).m, k);
      }
      std::vector<std::vector<std::vector<Cell>>> out(jobs.size());
      parallel_for(jobs.size(), resolve(opt), [&](std::size_t i) {
        const auto [m, k] = jobs[i];
        const SystemScenario& s = spec.scenario;
        const PowerInterval iv = linear_mode_interval(s, m, k);
        const double p = ee_optimal_pdl(s, m, k);
        if (p > iv.lo && p < iv.hi) {
          const double vc = ee(s, m, k, p).ee;
          const PowerSearch gs = ee_golden_linear(s, m, k);
          out[i].push_back(gap_row("lambert_vs_golden", k, m, p, gs.p_dl, vc, gs.ee,
                                   std::fabs(vc - gs.ee) / gs.ee, kLambertTolerance));
        }
        const double pa = algorithm1_select_pdl(s, m, k, spec.selection);
        const double va = ee(s, m, k, pa).ee;
        const PowerSearch grid = ee_reference_grid(s, m, k, spec.selection);
        out[i].push_back(gap_row("algorithm1_vs_grid", k, m, pa, grid.p_dl, va, grid.ee,
                                 (grid.ee - va) / grid.ee, kGridTolerance));
      });
      for (auto& rows : out) {
        for (auto& r : rows) t.rows.push_back(std::move(r));
      }
      break;
    }
    default:
      throw ValidationError(std::string("preset ") + to_string(spec.preset) +
                            " has no optimizer to compare");
  }
  return t;
}

}  // namespace wpt::experiments
