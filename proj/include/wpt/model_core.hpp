// SPDX-License-Identifier: Apache-2.0
//
// Average received and harvested energy at the users of a wirelessly powered
// massive-MIMO cell. The base station beamforms energy to K single-antenna
// users with a weighted sum of conjugate beamformers; each user runs a
// piecewise-linear harvester with activation and saturation thresholds.
//
// Every energy in this header is per symbol (J/symbol). Multiply by the
// system bandwidth to get watts.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace wpt {

using AntennaCount = std::int64_t;
using UserCount = std::int64_t;

/// Sentinel for a threshold that can never be reached (e.g. saturation of an
/// ideal harvester).
inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ceil(x) that forgives a few parts in 1e12 of rounding above an integer, so
/// a transmit power placed exactly on an activation boundary counts as active.
double threshold_ceil(double x);

/// Users dropped uniformly over an annulus around the base station with
/// large-scale gain C * d^-alpha.
struct GeometryModel {
  double r_min = 5.0;             // m
  double r_max = 20.0;            // m
  double path_exponent = 3.2;     // alpha, must exceed 2
  double intercept = 1.76e-4;     // C, gain at 1 m

  void validate() const;
};

/// Piecewise-linear rectifier: nothing below theta_act, eta_eh * input up to
/// theta_sat, clamped above. theta_sat = +inf encodes a harvester that never
/// saturates; theta_act = 0 with theta_sat = +inf is the ideal harvester.
struct HarvesterSpec {
  double theta_act = 0.0;         // W
  double theta_sat = kInfinity;   // W
  double eta_eh = 1.0;            // rectifier efficiency, (0, 1]
  double eta_pa_eh = 0.3;         // user PA efficiency, (0, 1)

  bool is_ideal() const { return theta_act == 0.0 && theta_sat == kInfinity; }
  void validate() const;

  static HarvesterSpec ideal(double eta_eh, double eta_pa_eh) {
    return {0.0, kInfinity, eta_eh, eta_pa_eh};
  }
};

/// One coherence block of S symbols split into training, downlink energy
/// transfer and uplink information transfer.
struct FrameConfig {
  double coherence_symbols = 1800.0;  // S
  double bandwidth = 1e6;             // B, Hz
  double alpha_tr = 0.0;
  double alpha_wet = 1.0;
  double alpha_wit = 0.0;
  int tau = 1;                        // pilot length, symbols
  double sigma2 = 3.981071705534985e-21;  // BS noise energy per symbol, J

  /// Checks the frame against a K-user cell (K <= tau < S).
  void validate(int users) const;
};

/// Downlink energy-beamforming configuration for an M x K cell.
struct DownlinkConfig {
  AntennaCount antennas = 1;     // M
  int users = 1;                 // K
  double p_dl = 0.0;             // transmit symbol energy, J/symbol
  std::vector<double> zeta;      // per-user energy weights, sum to 1
  std::vector<double> xi;        // per-user pilot share of harvested energy

  /// Average BS transmit power P_dl = alpha_wet * B * p_dl, in W.
  double transmit_power(const FrameConfig& frame) const {
    return frame.alpha_wet * frame.bandwidth * p_dl;
  }

  void validate() const;

  /// zeta_i = 1/K and a common xi for every user.
  static DownlinkConfig equal_split(AntennaCount antennas, int users, double p_dl, double xi);
};

enum class HarvestMode { inactive, linear, saturated };

const char* to_string(HarvestMode mode);

struct AntennaThresholds {
  AntennaCount m_act = 1;
  AntennaCount m_sat = kUnbounded;
};

struct EnergyReport {
  double incident = 0.0;     // J/symbol
  double harvested = 0.0;    // J/symbol
  HarvestMode mode = HarvestMode::inactive;
  AntennaCount m_act = 1;
  AntennaCount m_sat = kUnbounded;
};

/// Incident energy under estimated CSI: both candidate expressions plus the
/// branch that the activation candidate falls into.
struct ImperfectIncident {
  double psi_act = 0.0;
  double psi_sat = 0.0;
  HarvestMode branch = HarvestMode::inactive;

  double incident() const { return branch == HarvestMode::saturated ? psi_sat : psi_act; }
};

/// The three constants of the imperfect-CSI incident-energy quadratic.
struct ImperfectCsiTerms {
  double a1 = 0.0;  // alpha_wet p_dl beta zeta
  double a2 = 0.0;  // alpha_wet p_dl beta (1 - zeta)
  double a3 = 0.0;  // sigma^2 / (xi beta eta_pa eta_eh S)
};

/// E[d^-alpha] for d uniform over the annulus.
double mean_pathloss_moment(const GeometryModel& geom);

/// beta = C * E[d^-alpha].
double mean_large_scale_gain(const GeometryModel& geom);

/// Radius of the circle on which every user would see gain beta.
double equivalent_radius(const GeometryModel& geom);

double received_energy_perfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                               double beta, int user);

/// Limit of the perfect-CSI received energy when M = ratio * K and K grows.
double received_energy_limit(double ratio, double p_dl, double beta, double alpha_wet);

ImperfectCsiTerms imperfect_csi_terms(const DownlinkConfig& cfg, const FrameConfig& frame,
                                      const HarvesterSpec& harv, double beta, int user);

/// Larger root of gamma^2 + (a3 - a1 M - a2) gamma - (a1 + a2) a3 = 0.
double imperfect_incident_linear(const ImperfectCsiTerms& t, AntennaCount antennas);

/// Incident energy when the harvester is saturated and pilots carry
/// xi * eta_eh * theta_sat / B.
double imperfect_incident_saturated(const ImperfectCsiTerms& t, AntennaCount antennas,
                                    double theta_sat, double bandwidth);

ImperfectIncident received_energy_imperfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                            const HarvesterSpec& harv, double beta, int user);

HarvestMode classify_incident(double gamma, const HarvesterSpec& harv, double bandwidth);

double harvested_from_incident(double gamma, const HarvesterSpec& harv, double bandwidth);

AntennaThresholds antenna_thresholds_perfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                             const HarvesterSpec& harv, double beta, int user);

EnergyReport harvested_perfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                               const HarvesterSpec& harv, double beta, int user);

inline constexpr AntennaCount kDefaultThresholdSearchCap = 1'000'000;

/// Harvested energy with LS/MMSE channel estimates. Thresholds come from an
/// ascending scan over M; throws UnsatisfiableThreshold when a finite
/// threshold is not reached within `search_cap` antennas.
EnergyReport harvested_imperfect(const DownlinkConfig& cfg, const FrameConfig& frame,
                                 const HarvesterSpec& harv, double beta, int user,
                                 AntennaCount search_cap = kDefaultThresholdSearchCap);

/// Energy left after the user spends a fraction xi on uplink pilots.
double effective_harvested(const EnergyReport& report, double xi);

}  // namespace wpt
