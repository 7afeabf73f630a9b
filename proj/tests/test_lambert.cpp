// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <random>

#include "wpt/errors.hpp"
#include "wpt/golden_section.hpp"
#include "wpt/lambert.hpp"

using namespace wpt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double residual(double x) {
  const double w = lambert_w0(x);
  return std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x));
}

}  // namespace

TEST_CASE("Lambert W0 - exact points", "[lambert]") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK_THAT(lambert_w0(std::exp(1.0)), WithinRel(1.0, 1e-15));
  CHECK_THAT(lambert_w0(2.0 * std::exp(2.0)), WithinRel(2.0, 1e-15));
  CHECK_THAT(lambert_w0(-std::exp(-1.0)), WithinAbs(-1.0, 1e-7));
}

TEST_CASE("Lambert W0 - omega constant", "[lambert]") {
  // x = exp(-x) converges to W(1) from any start in (0, 1).
  double x = 0.5;
  for (int i = 0; i < 200; ++i) x = std::exp(-x);
  CHECK_THAT(lambert_w0(1.0), WithinRel(x, 1e-15));
  CHECK_THAT(lambert_w0(1.0), WithinAbs(0.567143290409783873, 1e-15));
}

TEST_CASE("Lambert W0 - residual over many decades", "[lambert][property]") {
  for (int e = -300; e <= 300; ++e) {
    const double x = std::pow(10.0, e / 2.0);
    CHECK(residual(x) <= 1e-12);
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-std::exp(-1.0), 0.0);
  for (int n = 0; n < 2000; ++n) {
    const double x = u(rng);
    CHECK(residual(x) <= 1e-12);
    CHECK(lambert_w0(x) >= -1.0);
  }
}

TEST_CASE("Lambert W0 - agrees with Boost", "[lambert]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> t(-12.0, 12.0);
  for (int n = 0; n < 2000; ++n) {
    const double x = std::pow(10.0, t(rng));
    CHECK_THAT(lambert_w0(x), WithinRel(boost::math::lambert_w0(x), 1e-14));
  }
  for (double x : {-0.36, -0.3, -0.2, -0.1, -1e-5, 1e-10}) {
    CHECK_THAT(lambert_w0(x), WithinRel(boost::math::lambert_w0(x), 1e-13));
  }
}

TEST_CASE("Lambert W0 - domain", "[lambert]") {
  CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_w0(-1.0), DomainError);
  CHECK_THROWS_AS(lambert_w0(std::nan("")), DomainError);
  CHECK(std::isinf(lambert_w0(INFINITY)));
}

TEST_CASE("Golden section - unimodal and monotone targets", "[golden]") {
  auto parabola = [](double x) { return -(x - 1.3) * (x - 1.3); };
  const SearchResult r = golden_section_max(parabola, -4.0, 7.0, 1e-12);
  CHECK_THAT(r.x, WithinAbs(1.3, 1e-6));

  auto rising = [](double x) { return x; };
  CHECK(golden_section_max(rising, 0.0, 2.0, 1e-10).x == 2.0);

  auto peaked = [](double x) { return std::log(x) - x / 250.0; };
  const SearchResult l = golden_section_max_log(peaked, 1e-3, 1e6, 1e-12);
  CHECK_THAT(l.x, WithinRel(250.0, 1e-5));
}

TEST_CASE("Fractional-program reduction through Lambert W", "[lambert]") {
  // f(z) = log(1 + b z) / (c + d z) peaks at (exp(W[bc/(de) - 1/e] + 1) - 1) / b.
  auto peak = [](double b, double c, double d) {
    const double e = std::exp(1.0);
    return std::expm1(lambert_w0(b * c / (d * e) - 1.0 / e) + 1.0) / b;
  };
  CHECK_THAT(peak(1.0, 1.0, 1.0), WithinRel(std::exp(1.0) - 1.0, 1e-15));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 200; ++n) {
    const double b = std::pow(10.0, u(rng));
    const double c = std::pow(10.0, u(rng));
    const double d = std::pow(10.0, u(rng));
    const double h = std::pow(10.0, u(rng) - 3.0);
    auto f = [&](double z) {
      const double l = std::log1p(b * z);
      return l / (c + d * z + h * l);
    };
    const double z = peak(b, c, d);
    const SearchResult g = golden_section_max_log(f, z * 1e-4, z * 1e4, 1e-13);
    CHECK(f(z) >= g.value * (1.0 - 1e-12));
    CHECK_THAT(z, WithinRel(g.x, 1e-5));
  }
}
