// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo link simulator: Rayleigh channel draws, orthogonal pilots,
// LS/MMSE estimation and conjugate energy beamforming. Trials are
// independent and keyed by (seed, trial index), so results do not depend
// on how trials are split across workers.
#pragma once

#include <cstdint>
#include <vector>

#include "wpt/model_core.hpp"
#include "wpt/scenario.hpp"

namespace wpt {

/// Column-major complex matrix with split real/imaginary storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), re_(rows * cols, 0.0), im_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* re(std::size_t col) { return re_.data() + col * rows_; }
  double* im(std::size_t col) { return im_.data() + col * rows_; }
  const double* re(std::size_t col) const { return re_.data() + col * rows_; }
  const double* im(std::size_t col) const { return im_.data() + col * rows_; }

  void fill_zero();

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

enum class Estimator { perfect, ls, mmse };

const char* to_string(Estimator e);

/// Everything one trial needs. Per-user vectors have length `users`.
struct McScenario {
  AntennaCount antennas = 1;
  int users = 1;
  std::vector<double> beta;
  std::vector<double> zeta;
  double p_dl = 1.0;        // J/symbol
  double alpha_wet = 1.0;
  int tau = 1;
  double sigma2 = 0.0;      // J/symbol
  std::vector<double> p_tr; // pilot symbol energy per user, J/symbol
  Estimator estimator = Estimator::perfect;

  void validate() const;
};

/// Pilot energies seeded from the closed-form imperfect-CSI incident
/// energy: tau p_tr = eta_pa_eh xi delta S.
McScenario make_mc_scenario(const DownlinkConfig& cfg, const FrameConfig& frame,
                            const HarvesterSpec& harv, const std::vector<double>& beta,
                            Estimator estimator);

McScenario make_mc_scenario(const SystemScenario& s, AntennaCount antennas, int users,
                            Estimator estimator);

struct ChannelRealization {
  ComplexMatrix h;           // M x K, CN(0, 1) entries
  ComplexMatrix g;           // H D^(1/2)
  ComplexMatrix pilot_obs;   // M x tau
  ComplexMatrix g_hat_ls;    // M x K
  ComplexMatrix g_hat_mmse;  // M x K
};

/// tau x K pilot matrix with orthonormal DFT columns.
ComplexMatrix pilot_matrix(int tau, int users);

/// One full draw, including both estimates. Pilots are skipped (and the
/// estimates equal G) when the scenario uses perfect CSI.
ChannelRealization draw_realization(std::uint64_t seed, std::uint64_t trial,
                                    const McScenario& sc);

/// sum_i sqrt(zeta_i) g_hat_i / ||g_hat_i||, as split arrays of length M.
void conjugate_beamformer(const ComplexMatrix& g_hat, const std::vector<double>& zeta,
                          std::vector<double>& w_re, std::vector<double>& w_im);

/// alpha_wet p_dl |g_i^H w|^2 for every user, with w built from g_hat.
std::vector<double> received_energies(const ComplexMatrix& g, const ComplexMatrix& g_hat,
                                      const McScenario& sc);

/// |g_i^H w|^2 split into the four parts of its expectation expansion. The
/// cross terms average to zero.
struct ReceivedTerms {
  double direct = 0.0;        // zeta_i |g_i^H u_i|^2
  double interference = 0.0;  // sum_{j != i} zeta_j |g_i^H u_j|^2
  double cross_self = 0.0;    // pairs that include user i
  double cross_other = 0.0;   // pairs of two other users
  double total() const { return direct + interference + cross_self + cross_other; }
};

ReceivedTerms received_terms(const ComplexMatrix& g, const ComplexMatrix& g_hat,
                             const std::vector<double>& zeta, int user);

struct TrialStats {
  std::int64_t n_trials = 0;
  double mean_incident = 0.0;     // J/symbol
  double std_err = 0.0;           // of mean_incident, J/symbol
  double mean_harvested = 0.0;    // J/symbol
  double harvested_std_err = 0.0; // J/symbol
  double harvested_power = 0.0;   // W
  std::uint64_t seed = 0;
};

struct McOptions {
  int workers = 0;  // 0: WPT_WORKERS or the hardware thread count
};

/// Worker count from WPT_WORKERS, else the hardware thread count.
int default_workers();

/// Per-user mean of alpha_wet p_dl |g_i^H w|^2.
std::vector<TrialStats> estimate_received_energy(std::int64_t n_trials, std::uint64_t seed,
                                                 const McScenario& sc, McOptions opt = {});

/// Applies the harvester map to the estimated mean incident energy.
std::vector<TrialStats> estimate_harvested_energy(std::int64_t n_trials, std::uint64_t seed,
                                                  const McScenario& sc,
                                                  const HarvesterSpec& harv, double bandwidth,
                                                  McOptions opt = {});

/// Re-estimates the pilot energies from the simulated harvest until the
/// relative change drops below `tol` or `max_iter` rounds have run.
std::vector<TrialStats> estimate_harvested_self_consistent(
    std::int64_t n_trials, std::uint64_t seed, McScenario sc, const HarvesterSpec& harv,
    const FrameConfig& frame, double xi, McOptions opt = {}, double tol = 1e-6,
    int max_iter = 50);

/// Mean and standard error of each expansion term for one user.
struct TermStats {
  double mean[4] = {0, 0, 0, 0};
  double std_err[4] = {0, 0, 0, 0};
};

TermStats estimate_received_terms(std::int64_t n_trials, std::uint64_t seed,
                                  const McScenario& sc, int user, McOptions opt = {});

/// Order-independent sum used by every reduction in this module.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace wpt
