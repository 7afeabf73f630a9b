// SPDX-License-Identifier: Apache-2.0
#include "wpt/power_pte.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

// Mirrors the antenna-threshold rounding so that k_max/k_sat agree with
// the per-user thresholds exactly.
bool reaches(AntennaCount antennas, int users, double theta, double beta_p) {
  if (theta == kInfinity) return false;
  const double x = 1.0 + (theta / beta_p - 1.0) * users;
  if (!(x > 1.0)) return true;
  return static_cast<double>(antennas) >= threshold_ceil(x);
}

UserCount users_reaching(AntennaCount antennas, double p_dl_watts, double beta, double theta) {
  if (theta == kInfinity) return 0;
  const double beta_p = beta * p_dl_watts;
  const double ratio = theta / beta_p;
  if (ratio <= 1.0) return kUnbounded;
  const double k = std::floor(static_cast<double>(antennas - 1) / (ratio - 1.0));
  if (k >= 2.0e9) return kUnbounded;
  auto count = static_cast<int>(k);
  while (count > 0 && !reaches(antennas, count, theta, beta_p)) --count;
  while (count < 2'000'000'000 && reaches(antennas, count + 1, theta, beta_p)) ++count;
  return count;
}

}  // namespace

PowerBreakdown bs_power_wet(AntennaCount antennas, int users, const FrameConfig& frame,
                            const BsPowerModel& pm, double p_dl_watts) {
  if (antennas < 1) throw ValidationError("need at least one antenna");
  if (users < 1) throw ValidationError("need at least one user");
  const double m = static_cast<double>(antennas);
  const double k = users;
  const double per_flop = frame.bandwidth / (frame.coherence_symbols * pm.kappa_bs);
  PowerBreakdown b;
  b.p_tx = p_dl_watts / pm.eta_pa_bs;
  b.p_fix = pm.p_fix;
  b.p_ant = m * pm.p_bs;
  b.p_ce = 2.0 * m * k * k * per_flop;
  b.p_lp = 3.0 * m * k * per_flop;
  return b;
}

PteReport pte(const FrameConfig& frame, const BsPowerModel& pm, const DownlinkConfig& cfg,
              const HarvesterSpec& harv, double beta, CsiModel csi) {
  const EnergyReport e = csi == CsiModel::perfect
                             ? harvested_perfect(cfg, frame, harv, beta, 0)
                             : harvested_imperfect(cfg, frame, harv, beta, 0);
  PteReport r;
  r.mode = e.mode;
  r.breakdown = bs_power_wet(cfg.antennas, cfg.users, frame, pm, cfg.transmit_power(frame));
  r.p_total = r.breakdown.total();
  r.sum_harvested = frame.bandwidth * cfg.users * e.harvested;
  r.pte = r.sum_harvested / r.p_total;
  return r;
}

PteReport pte(const SystemScenario& s, AntennaCount antennas, int users, CsiModel csi) {
  return pte(s.frame(users), s.power, s.downlink(antennas, users), s.harvester, s.beta(), csi);
}

UserCount k_max(AntennaCount antennas, double p_dl_watts, double beta, double theta_act) {
  if (theta_act <= 0.0) return kUnbounded;
  return users_reaching(antennas, p_dl_watts, beta, theta_act);
}

UserCount k_sat(AntennaCount antennas, double p_dl_watts, double beta, double theta_sat) {
  return users_reaching(antennas, p_dl_watts, beta, theta_sat);
}

double pte_antenna_rule_threshold(const SystemScenario& s, int users) {
  const double k = users;
  const double per_flop = s.bandwidth / (s.coherence_symbols * s.power.kappa_bs);
  const double d1 = s.power.p_bs + 2.0 * k * k * per_flop + 3.0 * k * per_flop;
  const double d2 = s.transmit_power / s.power.eta_pa_bs + s.power.p_fix;
  return d2 == 0.0 ? 1.0 : 1.0 + d2 / d1;
}

AntennaCount pte_optimal_m(const SystemScenario& s, int users) {
  if (s.harvester.theta_sat == kInfinity) {
    throw DomainError("closed-form antenna optimum needs a finite saturation threshold");
  }
  const FrameConfig f = s.frame(users);
  const DownlinkConfig cfg = s.downlink(1, users);
  const double beta = s.beta();
  const AntennaThresholds thr = antenna_thresholds_perfect(cfg, f, s.harvester, beta, 0);

  if (users >= pte_antenna_rule_threshold(s, users)) return thr.m_act;

  // PTE rises along the linear segment, but the clipped value at m_sat can
  // fall below the last unclipped point.
  if (thr.m_sat - 1 < thr.m_act) return thr.m_sat;
  const double below = pte(s, thr.m_sat - 1, users).pte;
  const double at = pte(s, thr.m_sat, users).pte;
  return below >= at ? thr.m_sat - 1 : thr.m_sat;
}

AntennaCount pte_sweep_limit_m(const SystemScenario& s, int users) {
  const DownlinkConfig cfg = s.downlink(1, users);
  const AntennaThresholds thr =
      antenna_thresholds_perfect(cfg, s.frame(users), s.harvester, s.beta(), 0);
  const AntennaCount top = thr.m_sat == kUnbounded ? thr.m_act : thr.m_sat;
  return top + std::max<AntennaCount>(1, top / 4);
}

AntennaCount pte_sweep_optimal_m(const SystemScenario& s, int users, AntennaCount hi,
                                 CsiModel csi) {
  AntennaCount best_m = 1;
  double best = -1.0;
  for (AntennaCount m = 1; m <= hi; ++m) {
    const double v = pte(s, m, users, csi).pte;
    if (v > best) {
      best = v;
      best_m = m;
    }
  }
  return best_m;
}

int pte_sweep_limit_k(const SystemScenario& s, AntennaCount antennas) {
  const UserCount by_frame = s.pilot_length
                                 ? *s.pilot_length
                                 : static_cast<UserCount>(std::ceil(s.coherence_symbols)) - 1;
  const UserCount kmax = k_max(antennas, s.transmit_power, s.beta(), s.harvester.theta_act);
  return static_cast<int>(std::max<UserCount>(1, std::min(by_frame, kmax)));
}

int pte_sweep_optimal_k(const SystemScenario& s, AntennaCount antennas, int hi, CsiModel csi) {
  int best_k = 1;
  double best = -1.0;
  for (int k = 1; k <= hi; ++k) {
    const double v = pte(s, antennas, k, csi).pte;
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  return best_k;
}

int pte_optimal_k(const SystemScenario& s, AntennaCount antennas) {
  if (antennas < 2) throw ValidationError("user optimum needs at least two antennas");
  const double beta = s.beta();
  const int hi = pte_sweep_limit_k(s, antennas);
  const int sat = static_cast<int>(
      std::min<UserCount>(hi, k_sat(antennas, s.transmit_power, beta, s.harvester.theta_sat)));

  const double m = static_cast<double>(antennas);
  const double per_flop = s.bandwidth / (s.coherence_symbols * s.power.kappa_bs);
  const double ce = 2.0 * m * per_flop;
  const double lp = 3.0 * m * per_flop;
  const double d3 = s.transmit_power / s.power.eta_pa_bs + s.power.p_fix + m * s.power.p_bs;

  int best_k = 0;
  double best = -1.0;
  auto consider = [&](double k_real, int lo, int up) {
    if (lo > up) return;
    const double fl = std::floor(k_real);
    for (double c : {fl, fl + 1.0}) {
      const int k = static_cast<int>(std::clamp(c, static_cast<double>(lo), static_cast<double>(up)));
      const double v = pte(s, antennas, k).pte;
      if (v > best || (v == best && k < best_k)) {
        best = v;
        best_k = k;
      }
    }
  };

  // Linear users: maximize (M - 1 + K) / (d3 + lp K + ce K^2).
  const double x = (d3 / (m - 1.0) - lp) / ((m - 1.0) * ce);
  const double k_lin = x > -1.0 ? (m - 1.0) * (std::sqrt(1.0 + x) - 1.0) : 0.0;
  consider(std::min(k_lin, 4.0e9), sat + 1, hi);
  // Saturated users: maximize K / (d3 + lp K + ce K^2).
  consider(std::min(std::sqrt(d3 / ce), 4.0e9), 1, sat);
  return best_k == 0 ? 1 : best_k;
}

}  // namespace wpt
