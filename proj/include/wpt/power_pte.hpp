// SPDX-License-Identifier: Apache-2.0
//
// Power transfer efficiency of the energy-transfer-only cell and its
// optimization over the number of antennas and users.
#pragma once

#include "wpt/bs_power.hpp"
#include "wpt/model_core.hpp"
#include "wpt/scenario.hpp"

namespace wpt {

enum class CsiModel { perfect, estimated };

struct PteReport {
  double pte = 0.0;
  double sum_harvested = 0.0;  // W
  double p_total = 0.0;        // W
  PowerBreakdown breakdown;
  HarvestMode mode = HarvestMode::inactive;
};

/// BS power for downlink energy transfer at transmit power `p_dl_watts`.
PowerBreakdown bs_power_wet(AntennaCount antennas, int users, const FrameConfig& frame,
                            const BsPowerModel& pm, double p_dl_watts);

/// PTE for an equal-split cell where every user sees gain `beta`.
PteReport pte(const FrameConfig& frame, const BsPowerModel& pm, const DownlinkConfig& cfg,
              const HarvesterSpec& harv, double beta, CsiModel csi = CsiModel::perfect);

PteReport pte(const SystemScenario& s, AntennaCount antennas, int users,
              CsiModel csi = CsiModel::perfect);

/// Largest K for which every user is active; kUnbounded when any K works.
UserCount k_max(AntennaCount antennas, double p_dl_watts, double beta, double theta_act);

/// Largest K for which every user is saturated; 0 when none can be.
UserCount k_sat(AntennaCount antennas, double p_dl_watts, double beta, double theta_sat);

/// 1 + (P_TX + P_FIX) / (P_BS + per-antenna computation): with at least
/// this many users the fewest active antennas maximize PTE.
double pte_antenna_rule_threshold(const SystemScenario& s, int users);

/// PTE-optimal antenna count for K users (closed form).
AntennaCount pte_optimal_m(const SystemScenario& s, int users);

/// Exhaustive argmax of PTE over M in [1, hi]; ties go to the smaller M.
AntennaCount pte_sweep_optimal_m(const SystemScenario& s, int users, AntennaCount hi,
                                 CsiModel csi = CsiModel::perfect);

/// Upper end of the antenna sweep: 25% past saturation.
AntennaCount pte_sweep_limit_m(const SystemScenario& s, int users);

/// PTE-optimal user count for M antennas (closed form, M >= 2).
int pte_optimal_k(const SystemScenario& s, AntennaCount antennas);

/// Largest K the frame admits (K <= tau < S) capped by K_max.
int pte_sweep_limit_k(const SystemScenario& s, AntennaCount antennas);

/// Exhaustive argmax of PTE over K in [1, hi]; ties go to the smaller K.
int pte_sweep_optimal_k(const SystemScenario& s, AntennaCount antennas, int hi,
                        CsiModel csi = CsiModel::perfect);

}  // namespace wpt
