// SPDX-License-Identifier: Apache-2.0
#include "wpt/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

constexpr double kSumTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_user(const DownlinkConfig& cfg, int user) {
  if (user < 0 || user >= cfg.users) {
    throw ValidationError("user index " + std::to_string(user) + " out of range");
  }
}

// ceil(1 + (theta / (beta P) - 1) / zeta), clamped to [1, kUnbounded].
AntennaCount threshold_count(double theta, double beta_p, double zeta) {
  if (theta == kInfinity) return kUnbounded;
  if (theta <= 0.0) return 1;
  const double x = 1.0 + (theta / beta_p - 1.0) / zeta;
  if (!(x > 1.0)) return 1;
  const double c = threshold_ceil(x);
  if (c >= 9.0e18) return kUnbounded;
  return static_cast<AntennaCount>(c);
}

}  // namespace

double threshold_ceil(double x) { return std::ceil(x - 1e-12 * std::fabs(x)); }

void GeometryModel::validate() const {
  if (!(path_exponent > 2.0)) {
    throw DomainError("path-loss exponent must exceed 2 for the annulus moment");
  }
  require(r_min > 0.0, "r_min must be positive");
  require(r_max > r_min, "r_max must exceed r_min");
  require(intercept > 0.0, "path-loss intercept must be positive");
}

void HarvesterSpec::validate() const {
  require(theta_act >= 0.0, "theta_act must be non-negative");
  require(theta_sat > theta_act, "theta_sat must exceed theta_act");
  require(eta_eh > 0.0 && eta_eh <= 1.0, "eta_eh must lie in (0, 1]");
  require(eta_pa_eh > 0.0 && eta_pa_eh < 1.0, "eta_pa_eh must lie in (0, 1)");
}

void FrameConfig::validate(int users) const {
  require(coherence_symbols >= 1.0, "coherence block must hold at least one symbol");
  require(bandwidth > 0.0, "bandwidth must be positive");
  require(sigma2 >= 0.0, "noise energy must be non-negative");
  require(alpha_tr >= 0.0 && alpha_wet >= 0.0 && alpha_wit >= 0.0,
          "frame fractions must be non-negative");
  require(std::abs(alpha_tr + alpha_wet + alpha_wit - 1.0) <= kSumTolerance,
          "frame fractions must sum to 1");
  require(tau >= users, "pilot length must be at least the number of users");
  require(tau < coherence_symbols, "pilot length must be shorter than the coherence block");
  require(std::abs(alpha_tr - tau / coherence_symbols) <= kSumTolerance,
          "training fraction must equal tau / S");
}

void DownlinkConfig::validate() const {
  require(antennas >= 1, "need at least one antenna");
  require(users >= 1, "need at least one user");
  require(p_dl >= 0.0, "transmit energy must be non-negative");
  require(zeta.size() == static_cast<std::size_t>(users), "need one zeta per user");
  require(xi.size() == static_cast<std::size_t>(users), "need one xi per user");
  double sum = 0.0;
  for (double z : zeta) {
    require(z > 0.0 && z <= 1.0, "zeta must lie in (0, 1]");
    sum += z;
  }
  require(std::abs(sum - 1.0) <= kSumTolerance, "zeta must sum to 1");
  for (double x : xi) require(x > 0.0 && x < 1.0, "xi must lie in (0, 1)");
}

DownlinkConfig DownlinkConfig::equal_split(AntennaCount antennas, int users, double p_dl,
                                           double xi) {
  DownlinkConfig cfg;
  cfg.antennas = antennas;
  cfg.users = users;
  cfg.p_dl = p_dl;
  cfg.zeta.assign(static_cast<std::size_t>(users), 1.0 / users);
  cfg.xi.assign(static_cast<std::size_t>(users), xi);
  return cfg;
}

const char* to_string(HarvestMode mode) {
  switch (mode) {
    case HarvestMode::inactive: return "inactive";
    case HarvestMode::linear: return "linear";
    case HarvestMode::saturated: return "saturated";
  }
  return "unknown";
}

double mean_pathloss_moment(const GeometryModel& geom) {
  geom.validate();
  const double a = geom.path_exponent;
  const double lo = geom.r_min;
  const double hi = geom.r_max;
  // r_max^(2-a) - r_min^(2-a) written to survive a thin annulus.
  const double num = std::pow(lo, 2.0 - a) * std::expm1((2.0 - a) * std::log1p((hi - lo) / lo));
  const double den = (1.0 - 0.5 * a) * (hi - lo) * (hi + lo);
  return num / den;
}

double mean_large_scale_gain(const GeometryModel& geom) {
  return geom.intercept * mean_pathloss_moment(geom);
}

double equivalent_radius(const GeometryModel& geom) {
  return std::pow(geom.intercept / mean_large_scale_gain(geom), 1.0 / geom.path_exponent);
}

double received_energy_perfect(const DownlinkConfig& cfg, const FrameConfig& frame, double beta,
                               int user) {
  check_user(cfg, user);
  const double z = cfg.zeta[static_cast<std::size_t>(user)];
  const double base = frame.alpha_wet * cfg.p_dl * beta;
  // Same association as the estimated-CSI terms, so noiseless pilots
  // reproduce this value bit for bit.
  return base * z * static_cast<double>(cfg.antennas) + base * (1.0 - z);
}

double received_energy_limit(double ratio, double p_dl, double beta, double alpha_wet) {
  if (!(ratio > 1.0)) throw DomainError("antenna-to-user ratio must exceed 1");
  return alpha_wet * p_dl * beta * (1.0 + ratio);
}

ImperfectCsiTerms imperfect_csi_terms(const DownlinkConfig& cfg, const FrameConfig& frame,
                                      const HarvesterSpec& harv, double beta, int user) {
  check_user(cfg, user);
  const auto u = static_cast<std::size_t>(user);
  const double z = cfg.zeta[u];
  const double xi = cfg.xi[u];
  if (!(xi > 0.0 && xi < 1.0)) throw ValidationError("xi must lie in (0, 1)");
  const double base = frame.alpha_wet * cfg.p_dl * beta;
  ImperfectCsiTerms t;
  t.a1 = base * z;
  t.a2 = base * (1.0 - z);
  t.a3 = frame.sigma2 / (xi * beta * harv.eta_pa_eh * harv.eta_eh * frame.coherence_symbols);
  return t;
}

double imperfect_incident_linear(const ImperfectCsiTerms& t, AntennaCount antennas) {
  const double perfect = t.a1 * static_cast<double>(antennas) + t.a2;
  if (t.a3 == 0.0) return perfect;
  const double b = perfect - t.a3;
  const double c = (t.a1 + t.a2) * t.a3;
  const double disc = b * b + 4.0 * c;
  if (disc < 0.0 || !std::isfinite(disc)) {
    throw InternalError("imperfect-CSI quadratic has no real root");
  }
  const double root = std::sqrt(disc);
  // Choose the cancellation-free form of the larger root.
  if (b >= 0.0) return 0.5 * (b + root);
  return 2.0 * c / (root - b);
}

double imperfect_incident_saturated(const ImperfectCsiTerms& t, AntennaCount antennas,
                                    double theta_sat, double bandwidth) {
  const double m = static_cast<double>(antennas);
  if (theta_sat == kInfinity || t.a3 == 0.0) return t.a1 * m + t.a2;
  const double snr = theta_sat / (bandwidth * t.a3);
  return t.a1 * m * (1.0 - ((m - 1.0) / m) / (1.0 + snr)) + t.a2;
}

HarvestMode classify_incident(double gamma, const HarvesterSpec& harv, double bandwidth) {
  if (gamma < harv.theta_act / bandwidth) return HarvestMode::inactive;
  if (gamma >= harv.theta_sat / bandwidth) return HarvestMode::saturated;
  return HarvestMode::linear;
}

double harvested_from_incident(double gamma, const HarvesterSpec& harv, double bandwidth) {
  switch (classify_incident(gamma, harv, bandwidth)) {
    case HarvestMode::inactive: return 0.0;
    case HarvestMode::linear: return harv.eta_eh * gamma;
    case HarvestMode::saturated: return harv.eta_eh * harv.theta_sat / bandwidth;
  }
  return 0.0;
}

ImperfectIncident received_energy_imperfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                            const HarvesterSpec& harv, double beta, int user) {
  const ImperfectCsiTerms t = imperfect_csi_terms(cfg, frame, harv, beta, user);
  ImperfectIncident out;
  out.psi_act = imperfect_incident_linear(t, cfg.antennas);
  out.psi_sat = imperfect_incident_saturated(t, cfg.antennas, harv.theta_sat, frame.bandwidth);
  out.branch = classify_incident(out.psi_act, harv, frame.bandwidth);
  return out;
}

AntennaThresholds antenna_thresholds_perfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                             const HarvesterSpec& harv, double beta, int user) {
  check_user(cfg, user);
  const double zeta = cfg.zeta[static_cast<std::size_t>(user)];
  const double beta_p = beta * cfg.transmit_power(frame);
  AntennaThresholds thr;
  thr.m_act = threshold_count(harv.theta_act, beta_p, zeta);
  thr.m_sat = threshold_count(harv.theta_sat, beta_p, zeta);
  if (thr.m_sat < thr.m_act) throw InternalError("saturation threshold below activation");
  return thr;
}

EnergyReport harvested_perfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                               const HarvesterSpec& harv, double beta, int user) {
  const AntennaThresholds thr = antenna_thresholds_perfect(cfg, frame, harv, beta, user);
  EnergyReport r;
  r.m_act = thr.m_act;
  r.m_sat = thr.m_sat;
  r.incident = received_energy_perfect(cfg, frame, beta, user);
  if (cfg.antennas < thr.m_act) {
    r.mode = HarvestMode::inactive;
    r.harvested = 0.0;
  } else if (cfg.antennas < thr.m_sat) {
    r.mode = HarvestMode::linear;
    r.harvested = harv.eta_eh * r.incident;
  } else {
    r.mode = HarvestMode::saturated;
    r.harvested = harv.eta_eh * harv.theta_sat / frame.bandwidth;
  }
  return r;
}

EnergyReport harvested_imperfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                 const HarvesterSpec& harv, double beta, int user,
                                 AntennaCount search_cap) {
  const ImperfectCsiTerms t = imperfect_csi_terms(cfg, frame, harv, beta, user);
  // Imperfect CSI never delivers more than perfect CSI, so the perfect-CSI
  // thresholds are valid starting points for the scan.
  const AntennaThresholds perfect = antenna_thresholds_perfect(cfg, frame, harv, beta, user);

  auto first_reaching = [&](double level, AntennaCount start, const char* what) {
    for (AntennaCount m = std::max<AntennaCount>(start, 1); m <= search_cap; ++m) {
      if (imperfect_incident_linear(t, m) >= level) return m;
    }
    throw UnsatisfiableThreshold(std::string(what) + " threshold not reached within " +
                                 std::to_string(search_cap) + " antennas");
  };

  EnergyReport r;
  r.m_act = harv.theta_act > 0.0
                ? first_reaching(harv.theta_act / frame.bandwidth, perfect.m_act, "activation")
                : 1;
  r.m_sat = harv.theta_sat == kInfinity
                ? kUnbounded
                : first_reaching(harv.theta_sat / frame.bandwidth,
                                 std::max(perfect.m_sat == kUnbounded ? 1 : perfect.m_sat, r.m_act),
                                 "saturation");

  const double psi_act = imperfect_incident_linear(t, cfg.antennas);
  if (cfg.antennas < r.m_act) {
    r.mode = HarvestMode::inactive;
    r.incident = psi_act;
    r.harvested = 0.0;
  } else if (cfg.antennas < r.m_sat) {
    r.mode = HarvestMode::linear;
    r.incident = psi_act;
    r.harvested = harv.eta_eh * psi_act;
  } else {
    r.mode = HarvestMode::saturated;
    r.incident =
        imperfect_incident_saturated(t, cfg.antennas, harv.theta_sat, frame.bandwidth);
    r.harvested = harv.eta_eh * harv.theta_sat / frame.bandwidth;
  }
  return r;
}

double effective_harvested(const EnergyReport& report, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw ValidationError("xi must lie in (0, 1)");
  return (1.0 - xi) * report.harvested;
}

}  // namespace wpt
