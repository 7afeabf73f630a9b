// SPDX-License-Identifier: Apache-2.0
#include "wpt/rate_ee.hpp"

#include <algorithm>
#include <cmath>

#include "wpt/errors.hpp"
#include "wpt/golden_section.hpp"
#include "wpt/lambert.hpp"

namespace wpt {

namespace {

constexpr double kE = 2.71828182845904523536;
constexpr double kInvE = 0.36787944117144232159552377016146;

void check_uplink(AntennaCount antennas, int users, const FrameConfig& frame) {
  if (users >= antennas) throw ValidationError("zero-forcing needs more antennas than users");
  if (!(frame.alpha_wit > 0.0)) throw ValidationError("uplink phase is empty (alpha_wit = 0)");
  if (!(frame.sigma2 > 0.0)) throw ValidationError("uplink rate needs positive noise energy");
}

double beamforming_gain(AntennaCount antennas, int users) {
  const double m = static_cast<double>(antennas);
  const double k = users;
  return (m - k) * (1.0 + (m - 1.0) / k);
}

}  // namespace

double rate_rho(const FrameConfig& frame, const DownlinkConfig& cfg, const HarvesterSpec& harv,
                double beta, int user) {
  const double xi = cfg.xi.at(static_cast<std::size_t>(user));
  return (1.0 - xi) * cfg.p_dl * frame.alpha_wet * harv.eta_eh * harv.eta_pa_eh * beta * beta /
         (frame.alpha_wit * frame.sigma2);
}

RateReport uplink_rate(const FrameConfig& frame, const DownlinkConfig& cfg,
                       const HarvesterSpec& harv, double beta, int user, CsiModel csi) {
  check_uplink(cfg.antennas, cfg.users, frame);
  const EnergyReport e = csi == CsiModel::perfect
                             ? harvested_perfect(cfg, frame, harv, beta, user)
                             : harvested_imperfect(cfg, frame, harv, beta, user);
  RateReport r;
  r.mode = e.mode;
  if (e.mode == HarvestMode::inactive) return r;
  const double xi = cfg.xi[static_cast<std::size_t>(user)];
  const double m = static_cast<double>(cfg.antennas);
  r.snr_effective = (1.0 - xi) * beta * harv.eta_pa_eh * e.harvested * (m - cfg.users) /
                    (frame.alpha_wit * frame.sigma2);
  r.per_user_rate = frame.alpha_wit * frame.bandwidth * std::log2(1.0 + r.snr_effective);
  r.sum_rate = cfg.users * r.per_user_rate;
  return r;
}

RateReport uplink_rate(const SystemScenario& s, AntennaCount antennas, int users,
                       double p_dl_watts, CsiModel csi) {
  return uplink_rate(s.frame(users), s.downlink_at(antennas, users, p_dl_watts), s.harvester,
                     s.beta(), 0, csi);
}

double low_snr_rate(AntennaCount antennas, int users, double rho, double alpha_wit,
                    double bandwidth) {
  return alpha_wit * bandwidth * rho * beamforming_gain(antennas, users) / std::log(2.0);
}

PowerBreakdown bs_power_wit(AntennaCount antennas, int users, const FrameConfig& frame,
                            const BsPowerModel& pm, double p_dl_watts, double sum_rate) {
  PowerBreakdown b = bs_power_wet(antennas, users, frame, pm, p_dl_watts);
  const double m = static_cast<double>(antennas);
  const double k = users;
  const double b_hz = frame.bandwidth;
  b.p_lp += b_hz * (k * k * k / 3.0 + 3.0 * m * k * k + m * k) /
                (frame.coherence_symbols * pm.kappa_bs) +
            2.0 * frame.alpha_wit * m * k * b_hz / pm.kappa_bs;
  b.p_dec = pm.p_dec * sum_rate;
  return b;
}

EeReport ee(const FrameConfig& frame, const BsPowerModel& pm, const DownlinkConfig& cfg,
            const HarvesterSpec& harv, double beta, CsiModel csi) {
  const RateReport r = uplink_rate(frame, cfg, harv, beta, 0, csi);
  EeReport out;
  out.mode = r.mode;
  out.sum_rate = r.sum_rate;
  out.breakdown =
      bs_power_wit(cfg.antennas, cfg.users, frame, pm, cfg.transmit_power(frame), r.sum_rate);
  out.p_total = out.breakdown.total();
  out.ee = out.sum_rate / out.p_total;
  return out;
}

EeReport ee(const SystemScenario& s, AntennaCount antennas, int users, double p_dl_watts,
            CsiModel csi) {
  return ee(s.frame(users), s.power, s.downlink_at(antennas, users, p_dl_watts), s.harvester,
            s.beta(), csi);
}

LambertConstants lambert_constants(const SystemScenario& s, AntennaCount antennas, int users) {
  const FrameConfig f = s.frame(users);
  check_uplink(antennas, users, f);
  const HarvesterSpec& h = s.harvester;
  const double beta = s.beta();
  const double k = users;
  const double kappa = s.power.kappa_bs;
  LambertConstants c;
  c.rho_tilde = (1.0 - s.xi) * f.alpha_wet * h.eta_eh * h.eta_pa_eh * beta * beta /
                (f.alpha_wit * f.sigma2);
  c.c_tilde = s.power.p_fix + f.bandwidth * k * k * k / (3.0 * f.coherence_symbols * kappa);
  c.d_tilde = s.power.p_bs + 2.0 * f.bandwidth / kappa * (1.0 + 2.0 / f.coherence_symbols) * k +
              3.0 * f.bandwidth / (f.coherence_symbols * kappa) * k * k;
  return c;
}

double ee_optimal_pdl(const SystemScenario& s, AntennaCount antennas, int users) {
  const LambertConstants c = lambert_constants(s, antennas, users);
  const FrameConfig f = s.frame(users);
  const double g = beamforming_gain(antennas, users);
  const double m = static_cast<double>(antennas);
  const double arg = s.power.eta_pa_bs * c.rho_tilde * (c.c_tilde + m * c.d_tilde) * g /
                         (kE * f.bandwidth * f.alpha_wet) -
                     kInvE;
  if (arg < -kInvE) throw InternalError("Lambert argument below -1/e");
  const double w = lambert_w0(arg);
  const double p_dl = std::expm1(1.0 + w) / (c.rho_tilde * g);
  return f.alpha_wet * f.bandwidth * p_dl;
}

PowerInterval linear_mode_interval(const SystemScenario& s, AntennaCount antennas, int users) {
  const double beta = s.beta();
  const double gain = static_cast<double>(antennas) + users - 1.0;
  PowerInterval iv;
  iv.lo = users * s.harvester.theta_act / (beta * gain);
  iv.hi = s.harvester.theta_sat == kInfinity ? kInfinity
                                             : users * s.harvester.theta_sat / (beta * gain);
  return iv;
}

PowerSelection select_pdl(const SystemScenario& s, AntennaCount antennas, int users,
                          PowerSelectionOptions opt) {
  const FrameConfig f = s.frame(users);
  const double k = users;
  const double m = static_cast<double>(antennas);
  const double scale = f.alpha_wet * f.bandwidth * s.beta();
  const double theta_act = s.harvester.theta_act;
  const double theta_sat = s.harvester.theta_sat;

  PowerSelection r;
  const double p_act = k * theta_act / (scale * (m + k - 1.0));
  const double p_sat = theta_sat == kInfinity
                           ? kInfinity
                           : k * theta_sat / (scale * (m + k + (opt.strict_saturation ? -1.0 : 1.0)));
  const double candidate = ee_optimal_pdl(s, antennas, users) / (f.alpha_wet * f.bandwidth);
  r.m_act = threshold_ceil(k * theta_act / (scale * candidate) - (k - 1.0));
  r.m_sat = theta_sat == kInfinity ? kInfinity
                                   : std::floor(k * theta_sat / (scale * candidate) - (k - 1.0));
  const double chosen = m > r.m_sat ? std::min(p_sat, candidate) : std::max(p_act, candidate);

  const double to_watts = f.alpha_wet * f.bandwidth;
  r.p_act = p_act * to_watts;
  r.p_sat = p_sat * to_watts;
  r.candidate = candidate * to_watts;
  r.selected = chosen * to_watts;
  return r;
}

PowerSearch ee_grid_search(const SystemScenario& s, AntennaCount antennas, int users, double lo,
                           double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw ValidationError("bad transmit-power grid");
  PowerSearch best;
  best.ee = -1.0;
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double p = i + 1 == points ? hi : lo * std::exp(step * i);
    const double v = ee(s, antennas, users, p).ee;
    if (v > best.ee) best = {p, v};
  }
  return best;
}

PowerSearch ee_reference_grid(const SystemScenario& s, AntennaCount antennas, int users,
                              PowerSelectionOptions opt) {
  const PowerSelection sel = select_pdl(s, antennas, users, opt);
  double lo = 0.01 * sel.p_act;
  double hi = 100.0 * sel.p_sat;
  if (!(lo > 0.0)) lo = 1e-3 * sel.candidate;
  if (!std::isfinite(hi)) hi = 1e3 * sel.candidate;
  return ee_grid_search(s, antennas, users, lo, hi, 200);
}

PowerSearch ee_golden_linear(const SystemScenario& s, AntennaCount antennas, int users) {
  const PowerInterval iv = linear_mode_interval(s, antennas, users);
  double lo = iv.lo * (1.0 + 1e-12);
  double hi = iv.hi * (1.0 - 1e-12);
  if (!(lo > 0.0) || !std::isfinite(hi)) {
    const double c = ee_optimal_pdl(s, antennas, users);
    if (!(lo > 0.0)) lo = 1e-3 * c;
    if (!std::isfinite(hi)) hi = 1e3 * c;
  }
  auto f = [&](double p) { return ee(s, antennas, users, p).ee; };
  const SearchResult r = golden_section_max_log(f, lo, hi, 1e-12);
  return {r.x, r.value};
}

}  // namespace wpt
