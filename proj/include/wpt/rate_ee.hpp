// SPDX-License-Identifier: Apache-2.0
//
// Uplink rate of wirelessly powered users with a zero-forcing receiver,
// total energy efficiency of the cell, and transmit-power selection.
#pragma once

#include "wpt/bs_power.hpp"
#include "wpt/model_core.hpp"
#include "wpt/power_pte.hpp"
#include "wpt/scenario.hpp"

namespace wpt {

struct RateReport {
  double per_user_rate = 0.0;  // bit/s
  double sum_rate = 0.0;       // bit/s
  double snr_effective = 0.0;
  HarvestMode mode = HarvestMode::inactive;
};

struct EeReport {
  double ee = 0.0;        // bit/J
  double sum_rate = 0.0;  // bit/s
  double p_total = 0.0;   // W
  PowerBreakdown breakdown;
  HarvestMode mode = HarvestMode::inactive;
};

struct LambertConstants {
  double rho_tilde = 0.0;  // 1/J
  double c_tilde = 0.0;    // W
  double d_tilde = 0.0;    // W
};

/// Uplink SNR scale rho: the linear-mode SNR is rho (M - K)(1 + (M - 1)/K).
double rate_rho(const FrameConfig& frame, const DownlinkConfig& cfg, const HarvesterSpec& harv,
                double beta, int user);

/// Achievable rate of `user` when the cell is symmetric (sum = K * rate).
/// Requires K < M and a non-empty uplink phase.
RateReport uplink_rate(const FrameConfig& frame, const DownlinkConfig& cfg,
                       const HarvesterSpec& harv, double beta, int user,
                       CsiModel csi = CsiModel::perfect);

RateReport uplink_rate(const SystemScenario& s, AntennaCount antennas, int users,
                       double p_dl_watts, CsiModel csi = CsiModel::perfect);

/// First-order expansion of the linear-mode rate, valid for small SNR.
double low_snr_rate(AntennaCount antennas, int users, double rho, double alpha_wit,
                    double bandwidth);

/// BS power with the uplink zero-forcing and decoding terms.
PowerBreakdown bs_power_wit(AntennaCount antennas, int users, const FrameConfig& frame,
                            const BsPowerModel& pm, double p_dl_watts, double sum_rate);

EeReport ee(const FrameConfig& frame, const BsPowerModel& pm, const DownlinkConfig& cfg,
            const HarvesterSpec& harv, double beta, CsiModel csi = CsiModel::perfect);

EeReport ee(const SystemScenario& s, AntennaCount antennas, int users, double p_dl_watts,
            CsiModel csi = CsiModel::perfect);

LambertConstants lambert_constants(const SystemScenario& s, AntennaCount antennas, int users);

/// EE-optimal transmit power (W) assuming every harvester stays linear.
double ee_optimal_pdl(const SystemScenario& s, AntennaCount antennas, int users);

/// Transmit powers (W) bounding linear operation: activation at `lo`,
/// saturation at `hi`.
struct PowerInterval {
  double lo = 0.0;
  double hi = kInfinity;
};

/// Exact inversion of the antenna thresholds at fixed M and K.
PowerInterval linear_mode_interval(const SystemScenario& s, AntennaCount antennas, int users);

struct PowerSelectionOptions {
  /// Exact saturation power (M + K - 1). When false, M + K + 1 is used,
  /// which clamps slightly inside the linear region.
  bool strict_saturation = true;
};

struct PowerSelection {
  double p_act = 0.0;       // W
  double p_sat = kInfinity; // W
  double candidate = 0.0;   // unclamped closed-form optimum, W
  double selected = 0.0;    // W
  double m_act = 0.0;       // thresholds at the candidate power
  double m_sat = kInfinity;
};

/// Clamp the closed-form optimum into the region where the harvesters are
/// active and not wastefully saturated.
PowerSelection select_pdl(const SystemScenario& s, AntennaCount antennas, int users,
                          PowerSelectionOptions opt = {});

inline double algorithm1_select_pdl(const SystemScenario& s, AntennaCount antennas, int users,
                                    PowerSelectionOptions opt = {}) {
  return select_pdl(s, antennas, users, opt).selected;
}

struct PowerSearch {
  double p_dl = 0.0;  // W
  double ee = 0.0;
};

/// EE over `points` log-spaced transmit powers in [lo, hi].
PowerSearch ee_grid_search(const SystemScenario& s, AntennaCount antennas, int users, double lo,
                           double hi, int points);

/// The reference grid: 200 points over [0.01 p_act, 100 p_sat]. Falls back
/// to three decades either side of the closed-form optimum for harvesters
/// without thresholds.
PowerSearch ee_reference_grid(const SystemScenario& s, AntennaCount antennas, int users,
                              PowerSelectionOptions opt = {});

/// Golden-section maximization of EE over the linear-mode interval.
PowerSearch ee_golden_linear(const SystemScenario& s, AntennaCount antennas, int users);

}  // namespace wpt
