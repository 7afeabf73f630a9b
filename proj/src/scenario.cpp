// SPDX-License-Identifier: Apache-2.0
#include "wpt/scenario.hpp"

#include <cmath>

#include "wpt/errors.hpp"

namespace wpt {

void BsPowerModel::validate() const {
  if (!(p_fix >= 0.0)) throw ValidationError("p_fix must be non-negative");
  if (!(p_bs >= 0.0)) throw ValidationError("p_bs must be non-negative");
  if (!(kappa_bs > 0.0)) throw ValidationError("kappa_bs must be positive");
  if (!(eta_pa_bs > 0.0 && eta_pa_bs < 1.0)) throw ValidationError("eta_pa_bs must lie in (0, 1)");
  if (!(p_dec >= 0.0)) throw ValidationError("p_dec must be non-negative");
}

FrameConfig SystemScenario::frame(int users) const {
  if (users < 1) throw ValidationError("need at least one user");
  FrameConfig f;
  f.coherence_symbols = coherence_symbols;
  f.bandwidth = bandwidth;
  f.sigma2 = sigma2;
  f.tau = pilot_length.value_or(users);
  f.alpha_tr = f.tau / coherence_symbols;
  if (split == FrameSplit::remainder) {
    f.alpha_wit = alpha_wit.value_or(0.0);
    f.alpha_wet = 1.0 - f.alpha_tr - f.alpha_wit;
  } else {
    f.alpha_wet = alpha_wet;
    f.alpha_wit = alpha_wit.value_or(1.0 - f.alpha_tr - alpha_wet);
  }
  if (!(f.alpha_wet > 0.0)) throw ValidationError("frame leaves no time for energy transfer");
  f.validate(users);
  return f;
}

DownlinkConfig SystemScenario::downlink_at(AntennaCount antennas, int users,
                                           double p_dl_watts) const {
  const FrameConfig f = frame(users);
  DownlinkConfig cfg = DownlinkConfig::equal_split(
      antennas, users, p_dl_watts / (f.alpha_wet * f.bandwidth), xi);
  cfg.validate();
  return cfg;
}

DownlinkConfig SystemScenario::downlink(AntennaCount antennas, int users) const {
  return downlink_at(antennas, users, transmit_power);
}

void SystemScenario::validate() const {
  geometry.validate();
  harvester.validate();
  power.validate();
  if (!(coherence_symbols >= 2.0)) throw ValidationError("coherence block too short");
  if (!(bandwidth > 0.0)) throw ValidationError("bandwidth must be positive");
  if (!(sigma2 >= 0.0)) throw ValidationError("noise energy must be non-negative");
  if (!(transmit_power >= 0.0)) throw ValidationError("transmit power must be non-negative");
  if (!(xi > 0.0 && xi < 1.0)) throw ValidationError("xi must lie in (0, 1)");
  if (split == FrameSplit::fixed_wet && !(alpha_wet > 0.0 && alpha_wet < 1.0)) {
    throw ValidationError("alpha_wet must lie in (0, 1)");
  }
  if (alpha_wit && !(*alpha_wit >= 0.0 && *alpha_wit < 1.0)) {
    throw ValidationError("alpha_wit must lie in [0, 1)");
  }
  if (pilot_length && *pilot_length < 1) throw ValidationError("pilot length must be positive");
}

double thermal_noise_energy() { return std::pow(10.0, -174.0 / 10.0) * 1e-3; }

SystemScenario wet_fixture() {
  SystemScenario s;
  s.geometry = {5.0, 20.0, 3.2, 1.76e-4};
  s.harvester = {1e-5, 1e-3, 0.5, 0.3};
  s.power = {1.0, 1.0, 2e10, 0.39, 0.0};
  s.coherence_symbols = 1800.0;
  s.bandwidth = 1e6;
  s.sigma2 = thermal_noise_energy();
  s.transmit_power = 10.0;
  s.xi = 0.1;
  return s;
}

SystemScenario xi_sweep_fixture() {
  SystemScenario s = wet_fixture();
  s.geometry.r_max = 50.0;
  s.coherence_symbols = 100.0;
  s.transmit_power = 20.0;
  return s;
}

SystemScenario wit_fixture() {
  SystemScenario s = wet_fixture();
  s.geometry.r_max = 50.0;
  s.power.p_fix = 18.0;
  s.power.p_dec = 1e-9;
  s.split = FrameSplit::fixed_wet;
  s.alpha_wet = 0.01;
  return s;
}

}  // namespace wpt
