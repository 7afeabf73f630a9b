// SPDX-License-Identifier: Apache-2.0
//
// A complete single-cell parameter set, and the fixtures used by the
// experiments. Transmit power is held in watts; the per-symbol energy p_dl
// is derived from the frame split for each K.
#pragma once

#include <optional>

#include "wpt/bs_power.hpp"
#include "wpt/model_core.hpp"

namespace wpt {

/// How the non-training part of the frame is divided.
enum class FrameSplit {
  remainder,  // alpha_wet takes whatever training and uplink leave over
  fixed_wet,  // alpha_wet is fixed, uplink takes the remainder
};

struct SystemScenario {
  GeometryModel geometry;
  HarvesterSpec harvester;
  BsPowerModel power;
  double coherence_symbols = 1800.0;
  double bandwidth = 1e6;
  double sigma2 = 0.0;              // J/symbol
  double transmit_power = 10.0;     // P_dl, W
  double xi = 0.1;
  FrameSplit split = FrameSplit::remainder;
  double alpha_wet = 1.0;           // used with FrameSplit::fixed_wet
  std::optional<double> alpha_wit;  // explicit uplink share
  std::optional<int> pilot_length;  // tau; defaults to K

  double beta() const { return mean_large_scale_gain(geometry); }

  /// Frame for a K-user cell. Throws ValidationError if the split is
  /// inconsistent.
  FrameConfig frame(int users) const;

  /// Equal-split downlink at `transmit_power`.
  DownlinkConfig downlink(AntennaCount antennas, int users) const;

  /// Equal-split downlink at an arbitrary transmit power in W.
  DownlinkConfig downlink_at(AntennaCount antennas, int users, double p_dl_watts) const;

  void validate() const;
};

/// BS noise energy for a -174 dBm/Hz thermal floor, J/symbol.
double thermal_noise_energy();

/// Energy-transfer-only cell: 10 W transmit power, users 5..20 m out.
SystemScenario wet_fixture();

/// Pilot-split study: the energy-transfer cell with M = 500 in mind,
/// S = 100, 20 W, users out to 50 m.
SystemScenario xi_sweep_fixture();

/// Uplink cell: 1% of the frame for energy transfer, users out to 50 m,
/// 18 W fixed power and 1 nW per bit/s decoding.
SystemScenario wit_fixture();

}  // namespace wpt
