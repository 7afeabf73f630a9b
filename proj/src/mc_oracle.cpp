// SPDX-License-Identifier: Apache-2.0
#include "wpt/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "wpt/errors.hpp"
#include "wpt/philox.hpp"
#include "wpt/simd/kernels.hpp"

namespace wpt {

namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr double kPi = 3.14159265358979323846;

void scale(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

struct Workspace {
  ComplexMatrix g;
  ComplexMatrix y;
  ComplexMatrix g_hat;
  std::vector<double> w_re;
  std::vector<double> w_im;

  explicit Workspace(const McScenario& sc)
      : g(static_cast<std::size_t>(sc.antennas), static_cast<std::size_t>(sc.users)),
        y(static_cast<std::size_t>(sc.antennas), static_cast<std::size_t>(sc.tau)),
        g_hat(static_cast<std::size_t>(sc.antennas), static_cast<std::size_t>(sc.users)) {}
};

void draw_channel(std::uint64_t seed, std::uint64_t trial, const McScenario& sc, ComplexMatrix& g,
                  ComplexMatrix* h) {
  GaussianStream gs(seed, trial, kChannelStream);
  const auto m = static_cast<std::size_t>(sc.antennas);
  for (int k = 0; k < sc.users; ++k) {
    const auto col = static_cast<std::size_t>(k);
    gs.fill(g.re(col), g.im(col), m);
    if (h != nullptr) {
      std::copy(g.re(col), g.re(col) + m, h->re(col));
      std::copy(g.im(col), g.im(col) + m, h->im(col));
    }
    const double s = std::sqrt(sc.beta[col]);
    scale(g.re(col), m, s);
    scale(g.im(col), m, s);
  }
}

// Y = G (Phi Delta^(1/2))^T + N, one pilot symbol per column.
void observe_pilots(std::uint64_t seed, std::uint64_t trial, const McScenario& sc,
                    const ComplexMatrix& phi, const ComplexMatrix& g, ComplexMatrix& y) {
  const auto& kern = simd::active_kernels();
  GaussianStream ns(seed, trial, kNoiseStream);
  const auto m = static_cast<std::size_t>(sc.antennas);
  const double noise = std::sqrt(sc.sigma2);
  for (int t = 0; t < sc.tau; ++t) {
    const auto ct = static_cast<std::size_t>(t);
    ns.fill(y.re(ct), y.im(ct), m);
    scale(y.re(ct), m, noise);
    scale(y.im(ct), m, noise);
    for (int k = 0; k < sc.users; ++k) {
      const auto ck = static_cast<std::size_t>(k);
      const double amp = std::sqrt(sc.tau * sc.p_tr[ck]);
      kern.caxpy(amp * phi.re(ck)[ct], amp * phi.im(ck)[ct], g.re(ck), g.im(ck), y.re(ct),
                 y.im(ct), m);
    }
  }
}

// Column k of Y conj(Phi), scaled by `gain`.
void project(const McScenario& sc, const ComplexMatrix& phi, const ComplexMatrix& y, int k,
             double gain, double* out_re, double* out_im) {
  const auto& kern = simd::active_kernels();
  const auto m = static_cast<std::size_t>(sc.antennas);
  const auto ck = static_cast<std::size_t>(k);
  std::fill(out_re, out_re + m, 0.0);
  std::fill(out_im, out_im + m, 0.0);
  for (int t = 0; t < sc.tau; ++t) {
    const auto ct = static_cast<std::size_t>(t);
    kern.caxpy(phi.re(ck)[ct], -phi.im(ck)[ct], y.re(ct), y.im(ct), out_re, out_im, m);
  }
  scale(out_re, m, gain);
  scale(out_im, m, gain);
}

double ls_gain(const McScenario& sc, int k) {
  return 1.0 / std::sqrt(sc.tau * sc.p_tr[static_cast<std::size_t>(k)]);
}

double mmse_gain(const McScenario& sc, int k) {
  const auto ck = static_cast<std::size_t>(k);
  const double e = sc.tau * sc.p_tr[ck];
  return std::sqrt(e) * sc.beta[ck] / (sc.beta[ck] * e + sc.sigma2);
}

void estimate(const McScenario& sc, const ComplexMatrix& phi, const ComplexMatrix& y,
              Estimator which, ComplexMatrix& g_hat) {
  for (int k = 0; k < sc.users; ++k) {
    const auto ck = static_cast<std::size_t>(k);
    const double gain = which == Estimator::ls ? ls_gain(sc, k) : mmse_gain(sc, k);
    project(sc, phi, y, k, gain, g_hat.re(ck), g_hat.im(ck));
  }
}

// Runs fn(worker_index, begin, end) over contiguous trial ranges.
template <class Fn>
void run_sharded(std::int64_t n, int workers, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::int64_t>(1, n))));
  if (workers == 1) {
    fn(0, std::int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t b = w * chunk;
    const std::int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, w, b, e] {
      try {
        fn(w, b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int resolve_workers(const McOptions& opt) {
  return opt.workers > 0 ? opt.workers : default_workers();
}

void summarize(const double* x, std::int64_t n, double& mean, double& std_err) {
  const auto un = static_cast<std::size_t>(n);
  mean = pairwise_sum(x, un) / static_cast<double>(n);
  if (n < 2) {
    std_err = 0.0;
    return;
  }
  std::vector<double> dev(un);
  for (std::size_t i = 0; i < un; ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
  const double var = pairwise_sum(dev.data(), un) / static_cast<double>(n - 1);
  std_err = std::sqrt(var / static_cast<double>(n));
}

}  // namespace

void ComplexMatrix::fill_zero() {
  std::fill(re_.begin(), re_.end(), 0.0);
  std::fill(im_.begin(), im_.end(), 0.0);
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::perfect: return "perfect";
    case Estimator::ls: return "ls";
    case Estimator::mmse: return "mmse";
  }
  return "unknown";
}

void McScenario::validate() const {
  const auto k = static_cast<std::size_t>(users);
  if (antennas < 1 || users < 1) throw ValidationError("need M >= 1 and K >= 1");
  if (beta.size() != k || zeta.size() != k) throw ValidationError("need one beta and zeta per user");
  for (double b : beta) {
    if (!(b > 0.0)) throw ValidationError("beta must be positive");
  }
  double sum = 0.0;
  for (double z : zeta) {
    if (!(z > 0.0 && z <= 1.0)) throw ValidationError("zeta must lie in (0, 1]");
    sum += z;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("zeta must sum to 1");
  if (!(p_dl >= 0.0) || !(alpha_wet > 0.0)) throw ValidationError("bad downlink energy");
  if (estimator != Estimator::perfect) {
    if (tau < users) throw ValidationError("pilot length below user count: pilots not orthogonal");
    if (!(sigma2 >= 0.0)) throw ValidationError("noise energy must be non-negative");
    if (p_tr.size() != k) throw ValidationError("need one pilot energy per user");
    for (double p : p_tr) {
      if (!(p > 0.0)) throw ValidationError("pilot energy must be positive");
    }
  }
}

McScenario make_mc_scenario(const DownlinkConfig& cfg, const FrameConfig& frame,
                            const HarvesterSpec& harv, const std::vector<double>& beta,
                            Estimator estimator) {
  McScenario sc;
  sc.antennas = cfg.antennas;
  sc.users = cfg.users;
  sc.beta = beta;
  sc.zeta = cfg.zeta;
  sc.p_dl = cfg.p_dl;
  sc.alpha_wet = frame.alpha_wet;
  sc.tau = frame.tau;
  sc.sigma2 = frame.sigma2;
  sc.estimator = estimator;
  sc.p_tr.resize(beta.size());
  for (int i = 0; i < cfg.users; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const ImperfectIncident inc = received_energy_imperfect(cfg, frame, harv, beta.at(u), i);
    const double delta = inc.branch == HarvestMode::saturated
                             ? harv.eta_eh * harv.theta_sat / frame.bandwidth
                             : harv.eta_eh * inc.psi_act;
    sc.p_tr[u] = harv.eta_pa_eh * cfg.xi[u] * delta * frame.coherence_symbols / frame.tau;
  }
  sc.validate();
  return sc;
}

McScenario make_mc_scenario(const SystemScenario& s, AntennaCount antennas, int users,
                            Estimator estimator) {
  return make_mc_scenario(s.downlink(antennas, users), s.frame(users), s.harvester,
                          std::vector<double>(static_cast<std::size_t>(users), s.beta()),
                          estimator);
}

ComplexMatrix pilot_matrix(int tau, int users) {
  if (tau < users) throw ValidationError("pilot length below user count: pilots not orthogonal");
  ComplexMatrix phi(static_cast<std::size_t>(tau), static_cast<std::size_t>(users));
  const double norm = 1.0 / std::sqrt(static_cast<double>(tau));
  for (int k = 0; k < users; ++k) {
    for (int t = 0; t < tau; ++t) {
      // Reduce t*k mod tau first so the angle stays small.
      const double angle = -2.0 * kPi * static_cast<double>((static_cast<std::int64_t>(t) * k) % tau) / tau;
      phi.re(static_cast<std::size_t>(k))[t] = norm * std::cos(angle);
      phi.im(static_cast<std::size_t>(k))[t] = norm * std::sin(angle);
    }
  }
  return phi;
}

ChannelRealization draw_realization(std::uint64_t seed, std::uint64_t trial,
                                    const McScenario& sc) {
  sc.validate();
  const auto m = static_cast<std::size_t>(sc.antennas);
  const auto k = static_cast<std::size_t>(sc.users);
  ChannelRealization r;
  r.h = ComplexMatrix(m, k);
  r.g = ComplexMatrix(m, k);
  draw_channel(seed, trial, sc, r.g, &r.h);
  if (sc.estimator == Estimator::perfect) {
    r.g_hat_ls = r.g;
    r.g_hat_mmse = r.g;
    return r;
  }
  const ComplexMatrix phi = pilot_matrix(sc.tau, sc.users);
  r.pilot_obs = ComplexMatrix(m, static_cast<std::size_t>(sc.tau));
  observe_pilots(seed, trial, sc, phi, r.g, r.pilot_obs);
  r.g_hat_ls = ComplexMatrix(m, k);
  r.g_hat_mmse = ComplexMatrix(m, k);
  estimate(sc, phi, r.pilot_obs, Estimator::ls, r.g_hat_ls);
  estimate(sc, phi, r.pilot_obs, Estimator::mmse, r.g_hat_mmse);
  return r;
}

void conjugate_beamformer(const ComplexMatrix& g_hat, const std::vector<double>& zeta,
                          std::vector<double>& w_re, std::vector<double>& w_im) {
  const auto& kern = simd::active_kernels();
  const std::size_t m = g_hat.rows();
  w_re.assign(m, 0.0);
  w_im.assign(m, 0.0);
  for (std::size_t k = 0; k < g_hat.cols(); ++k) {
    const double norm = std::sqrt(kern.sq_norm(g_hat.re(k), g_hat.im(k), m));
    if (!(norm > 0.0)) {
      throw DegenerateEstimate("channel estimate of user " + std::to_string(k) + " is zero");
    }
    const double a = std::sqrt(zeta[k]) / norm;
    kern.axpy(a, g_hat.re(k), w_re.data(), m);
    kern.axpy(a, g_hat.im(k), w_im.data(), m);
  }
}

namespace {

void energies_into(const ComplexMatrix& g, const std::vector<double>& w_re,
                   const std::vector<double>& w_im, const McScenario& sc, double* out,
                   std::size_t stride) {
  const auto& kern = simd::active_kernels();
  const double scale_e = sc.alpha_wet * sc.p_dl;
  for (std::size_t i = 0; i < g.cols(); ++i) {
    double re = 0.0;
    double im = 0.0;
    kern.dot_conj(g.re(i), g.im(i), w_re.data(), w_im.data(), g.rows(), &re, &im);
    out[i * stride] = scale_e * (re * re + im * im);
  }
}

}  // namespace

std::vector<double> received_energies(const ComplexMatrix& g, const ComplexMatrix& g_hat,
                                      const McScenario& sc) {
  std::vector<double> w_re, w_im;
  conjugate_beamformer(g_hat, sc.zeta, w_re, w_im);
  std::vector<double> out(g.cols());
  energies_into(g, w_re, w_im, sc, out.data(), 1);
  return out;
}

ReceivedTerms received_terms(const ComplexMatrix& g, const ComplexMatrix& g_hat,
                             const std::vector<double>& zeta, int user) {
  const auto& kern = simd::active_kernels();
  const std::size_t m = g.rows();
  const std::size_t k = g.cols();
  const auto ui = static_cast<std::size_t>(user);
  // c_j = sqrt(zeta_j) g_i^H u_j with u_j the normalized estimate.
  std::vector<double> cr(k), ci(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double norm = std::sqrt(kern.sq_norm(g_hat.re(j), g_hat.im(j), m));
    if (!(norm > 0.0)) throw DegenerateEstimate("channel estimate is zero");
    kern.dot_conj(g.re(ui), g.im(ui), g_hat.re(j), g_hat.im(j), m, &cr[j], &ci[j]);
    const double a = std::sqrt(zeta[j]) / norm;
    cr[j] *= a;
    ci[j] *= a;
  }
  ReceivedTerms t;
  for (std::size_t u = 0; u < k; ++u) {
    const double p = cr[u] * cr[u] + ci[u] * ci[u];
    if (u == ui) {
      t.direct = p;
    } else {
      t.interference += p;
    }
    for (std::size_t v = u + 1; v < k; ++v) {
      const double c = 2.0 * (cr[u] * cr[v] + ci[u] * ci[v]);
      if (u == ui || v == ui) {
        t.cross_self += c;
      } else {
        t.cross_other += c;
      }
    }
  }
  return t;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

int default_workers() {
  if (const char* env = std::getenv("WPT_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<TrialStats> estimate_received_energy(std::int64_t n_trials, std::uint64_t seed,
                                                 const McScenario& sc, McOptions opt) {
  if (n_trials < 1) throw ValidationError("need at least one trial");
  sc.validate();
  const auto k = static_cast<std::size_t>(sc.users);
  const auto n = static_cast<std::size_t>(n_trials);
  const ComplexMatrix phi =
      sc.estimator == Estimator::perfect ? ComplexMatrix() : pilot_matrix(sc.tau, sc.users);
  // samples[user * n + trial]
  std::vector<double> samples(k * n);

  run_sharded(n_trials, resolve_workers(opt), [&](int, std::int64_t b, std::int64_t e) {
    Workspace ws(sc);
    for (std::int64_t t = b; t < e; ++t) {
      const auto trial = static_cast<std::uint64_t>(t);
      draw_channel(seed, trial, sc, ws.g, nullptr);
      const ComplexMatrix* g_hat = &ws.g;
      if (sc.estimator != Estimator::perfect) {
        observe_pilots(seed, trial, sc, phi, ws.g, ws.y);
        estimate(sc, phi, ws.y, sc.estimator, ws.g_hat);
        g_hat = &ws.g_hat;
      }
      conjugate_beamformer(*g_hat, sc.zeta, ws.w_re, ws.w_im);
      energies_into(ws.g, ws.w_re, ws.w_im, sc, samples.data() + t, n);
    }
  });

  std::vector<TrialStats> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    TrialStats& st = out[i];
    st.n_trials = n_trials;
    st.seed = seed;
    summarize(samples.data() + i * n, n_trials, st.mean_incident, st.std_err);
  }
  return out;
}

std::vector<TrialStats> estimate_harvested_energy(std::int64_t n_trials, std::uint64_t seed,
                                                  const McScenario& sc,
                                                  const HarvesterSpec& harv, double bandwidth,
                                                  McOptions opt) {
  std::vector<TrialStats> out = estimate_received_energy(n_trials, seed, sc, opt);
  for (TrialStats& st : out) {
    st.mean_harvested = harvested_from_incident(st.mean_incident, harv, bandwidth);
    st.harvested_std_err = classify_incident(st.mean_incident, harv, bandwidth) ==
                                   HarvestMode::linear
                               ? harv.eta_eh * st.std_err
                               : 0.0;
    st.harvested_power = bandwidth * st.mean_harvested;
  }
  return out;
}

std::vector<TrialStats> estimate_harvested_self_consistent(
    std::int64_t n_trials, std::uint64_t seed, McScenario sc, const HarvesterSpec& harv,
    const FrameConfig& frame, double xi, McOptions opt, double tol, int max_iter) {
  if (sc.estimator == Estimator::perfect) {
    return estimate_harvested_energy(n_trials, seed, sc, harv, frame.bandwidth, opt);
  }
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<TrialStats> st = estimate_received_energy(n_trials, seed, sc, opt);
    double change = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i) {
      const double gamma = st[i].mean_incident;
      const double delta = gamma >= harv.theta_sat / frame.bandwidth
                               ? harv.eta_eh * harv.theta_sat / frame.bandwidth
                               : harv.eta_eh * gamma;
      const double p = harv.eta_pa_eh * xi * delta * frame.coherence_symbols / sc.tau;
      change = std::max(change, std::abs(p - sc.p_tr[i]) / sc.p_tr[i]);
      sc.p_tr[i] = p;
    }
    if (change < tol) break;
  }
  return estimate_harvested_energy(n_trials, seed, sc, harv, frame.bandwidth, opt);
}

TermStats estimate_received_terms(std::int64_t n_trials, std::uint64_t seed,
                                  const McScenario& sc, int user, McOptions opt) {
  if (n_trials < 1) throw ValidationError("need at least one trial");
  sc.validate();
  if (user < 0 || user >= sc.users) throw ValidationError("user index out of range");
  const auto n = static_cast<std::size_t>(n_trials);
  const ComplexMatrix phi =
      sc.estimator == Estimator::perfect ? ComplexMatrix() : pilot_matrix(sc.tau, sc.users);
  std::vector<double> samples(4 * n);
  run_sharded(n_trials, resolve_workers(opt), [&](int, std::int64_t b, std::int64_t e) {
    Workspace ws(sc);
    for (std::int64_t t = b; t < e; ++t) {
      const auto trial = static_cast<std::uint64_t>(t);
      draw_channel(seed, trial, sc, ws.g, nullptr);
      const ComplexMatrix* g_hat = &ws.g;
      if (sc.estimator != Estimator::perfect) {
        observe_pilots(seed, trial, sc, phi, ws.g, ws.y);
        estimate(sc, phi, ws.y, sc.estimator, ws.g_hat);
        g_hat = &ws.g_hat;
      }
      const ReceivedTerms r = received_terms(ws.g, *g_hat, sc.zeta, user);
      const double scale_e = sc.alpha_wet * sc.p_dl;
      const auto ut = static_cast<std::size_t>(t);
      samples[ut] = scale_e * r.direct;
      samples[n + ut] = scale_e * r.interference;
      samples[2 * n + ut] = scale_e * r.cross_self;
      samples[3 * n + ut] = scale_e * r.cross_other;
    }
  });
  TermStats out;
  for (std::size_t j = 0; j < 4; ++j) {
    summarize(samples.data() + j * n, n_trials, out.mean[j], out.std_err[j]);
  }
  return out;
}

}  // namespace wpt
