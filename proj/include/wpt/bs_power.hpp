// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace wpt {

/// Base-station power consumption parameters. Circuit power scales with the
/// number of antennas and users; transmit power is drawn through a PA.
struct BsPowerModel {
  double p_fix = 1.0;       // fixed power, W
  double p_bs = 1.0;        // per RF chain, W
  double kappa_bs = 20e9;   // computational efficiency, flops/W
  double eta_pa_bs = 0.39;  // BS PA efficiency, (0, 1)
  double p_dec = 0.0;       // decoding power, W per bit/s

  void validate() const;
};

/// Power terms of the BS budget, in W.
struct PowerBreakdown {
  double p_tx = 0.0;
  double p_fix = 0.0;
  double p_ant = 0.0;
  double p_ce = 0.0;
  double p_lp = 0.0;
  double p_dec = 0.0;

  double total() const { return p_tx + p_fix + p_ant + p_ce + p_lp + p_dec; }
};

}  // namespace wpt
