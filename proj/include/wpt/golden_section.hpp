// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace wpt {

struct SearchResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section maximization of a unimodal f on [lo, hi], stopping when
/// the bracket is narrower than `tol`. The endpoints are compared
/// against the interior optimum so that a monotone f returns its boundary.
template <class F>
SearchResult golden_section_max(F&& f, double lo, double hi, double tol,
                                int max_iter = 400) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  SearchResult best{fc >= fd ? c : d, fc >= fd ? fc : fd, evals};
  for (double edge : {lo, hi}) {
    const double v = f(edge);
    ++best.evaluations;
    if (v > best.value) best = {edge, v, best.evaluations};
  }
  return best;
}

/// Same search over log(x) for positive brackets spanning decades;
/// `rel_tol` bounds the relative width of the final bracket.
template <class F>
SearchResult golden_section_max_log(F&& f, double lo, double hi, double rel_tol = 1e-10,
                                    int max_iter = 400) {
  auto g = [&](double t) { return f(std::exp(t)); };
  SearchResult r = golden_section_max(g, std::log(lo), std::log(hi), rel_tol, max_iter);
  r.x = std::exp(r.x);
  return r;
}

}  // namespace wpt
