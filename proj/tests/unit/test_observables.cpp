// Copyright 2026 The cantori Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cantori/observables.hpp"
#include "cantori/rng.hpp"

using namespace cantori;
using std::numbers::pi;

namespace {

// Exact bin masses of a uniform density on [-a, a].
MomentumDistribution uniform_on(const MomentumGrid& g, double a) {
  MomentumDistribution d(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double overlap = std::max(0.0, std::min(g.upper_edge(i), a) - std::max(g.lower_edge(i), -a));
    d.probabilities()[i] = overlap / (2.0 * a);
  }
  return d;
}

// Exact bin masses of a centred Gaussian.
MomentumDistribution gaussian(const MomentumGrid& g, double sigma) {
  MomentumDistribution d(g);
  auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); };
  for (std::size_t i = 0; i < g.size(); ++i) d.probabilities()[i] = cdf(g.upper_edge(i)) - cdf(g.lower_edge(i));
  return d;
}

MomentumDistribution random_distribution(RandomStream& rng, const MomentumGrid& g) {
  MomentumDistribution d(g);
  for (auto& p : d.probabilities()) p = rng.uniform() * rng.uniform();
  d.normalize();
  return d;
}

}  // namespace

TEST_CASE("fraction outside") {
  const auto g = MomentumGrid::covering(40.0 * pi);
  CHECK(fraction_outside(uniform_on(g, 30.0 * pi), 10.0 * pi) == doctest::Approx(200.0 / 3.0).epsilon(0.01 / 66.67));
  // Tail oracle: 100 erfc(rho_c / (sigma sqrt 2)).
  const double tail = 100.0 * std::erfc(10.0 * pi / (9.2 * std::sqrt(2.0)));
  CHECK(tail == doctest::Approx(0.064).epsilon(0.02));
  // Linear splitting of the straddling bin is exact only in the fine-bin limit.
  const auto fine = MomentumGrid::covering(40.0 * pi, 0.005);
  CHECK(fraction_outside(gaussian(fine, 9.2), 10.0 * pi) == doctest::Approx(tail).epsilon(1e-3));
  CHECK(fraction_outside(gaussian(g, 9.2), 10.0 * pi) == doctest::Approx(tail).epsilon(0.01));
  CHECK(fraction_outside(uniform_on(g, 5.0 * pi), 10.0 * pi) == 0.0);
  CHECK_THROWS_AS(fraction_outside(uniform_on(g, 1.0), 0.0), std::invalid_argument);
}

TEST_CASE("kinetic energy") {
  const auto g = MomentumGrid::covering(40.0 * pi, 0.05);
  CHECK(kinetic_energy(gaussian(g, 9.2)) == doctest::Approx(9.2 * 9.2 / 2.0).epsilon(1e-3));
  CHECK(kinetic_energy(uniform_on(g, 30.0 * pi)) == doctest::Approx(std::pow(30.0 * pi, 2) / 6.0).epsilon(1e-4));
  const MomentumGrid fine(pi / 10.0, 400);
  MomentumDistribution delta(fine);
  delta.deposit(10.0 * pi, 1.0);
  CHECK(kinetic_energy(delta) == doctest::Approx(std::pow(10.0 * pi, 2) / 2.0).epsilon(1e-12));
}

TEST_CASE("localization length fits") {
  const auto g = MomentumGrid::covering(40.0 * pi);
  for (double l : {170.0, 50.0}) {
    const auto d = distribution_from_density(g, [&](double rho) { return std::exp(-2.0 * std::abs(rho) / l); });
    const auto fit = fit_localization_length(d);
    CHECK(fit.l_rho == doctest::Approx(l).epsilon(0.05));
    CHECK_FALSE(fit.non_exponential);
  }
  CHECK(localization_length_estimate(30.0, 2.6) == doctest::Approx(173.1).epsilon(1e-3));
  const auto flat = distribution_from_density(g, [](double) { return 1.0; });
  CHECK_THROWS_AS(fit_localization_length(flat), std::invalid_argument);
  const auto rising = distribution_from_density(g, [](double rho) { return std::exp(std::abs(rho) / 40.0); });
  CHECK_THROWS_AS(fit_localization_length(rising), std::invalid_argument);
  const auto bumpy = distribution_from_density(g, [](double rho) {
    return std::exp(-std::abs(rho) / 30.0) * (1.0 + 0.9 * std::cos(rho));
  });
  CHECK(fit_localization_length(bumpy).non_exponential);
}

TEST_CASE("break time of simple curves") {
  const auto flat = DiffusionCurve::from_series(std::vector<double>(71, 12.0), 300.0, 0.02, Engine::quantum);
  CHECK(break_time(flat, 4.0).kick == 0);
  std::vector<double> rise(71);
  for (std::size_t n = 0; n < rise.size(); ++n) rise[n] = 40.0 * (1.0 - std::exp(-static_cast<double>(n) / 4.0));
  const auto bt = break_time(DiffusionCurve::from_series(rise, 300.0, 0.02, Engine::quantum), 4.0);
  REQUIRE(bt.kick.has_value());
  // 40 exp(-N/4) <= 4 first at N = 10.
  CHECK(*bt.kick == 10);
  std::vector<double> ramp(71);
  for (std::size_t n = 0; n < ramp.size(); ++n) ramp[n] = static_cast<double>(n);
  CHECK_FALSE(break_time(DiffusionCurve::from_series(ramp, 0, 0, Engine::quantum), 4.0).kick.has_value());
  BreakTimeOptions strict;
  strict.reference = SaturationReference::late_mean;
  strict.max_late_slope = 0.05;
  std::vector<double> drift(71);
  for (std::size_t n = 0; n < drift.size(); ++n) drift[n] = 20.0 + 0.2 * static_cast<double>(n);
  const auto drifting = DiffusionCurve::from_series(drift, 0, 0, Engine::quantum);
  CHECK_FALSE(break_time(drifting, 4.0, strict).kick.has_value());
  CHECK(break_time(drifting, 4.0).kick == 0);
}

TEST_CASE("property: break time ignores post-saturation samples") {
  RandomStream rng(31, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double level = rng.uniform(5.0, 60.0), tau = rng.uniform(1.0, 10.0);
    std::vector<double> c(71);
    for (std::size_t n = 0; n < c.size(); ++n)
      c[n] = std::max(0.0, level * (1.0 - std::exp(-static_cast<double>(n) / tau)) + rng.uniform(-1.0, 1.0));
    const auto base = break_time(DiffusionCurve::from_series(c, 0, 0, Engine::quantum), 4.0);
    for (int extra = 0; extra < 30; ++extra) c.push_back(level + rng.uniform(-1.0, 1.0));
    const auto longer = break_time(DiffusionCurve::from_series(c, 0, 0, Engine::quantum), 4.0);
    CHECK(base.kick == longer.kick);
  }
}

TEST_CASE("detector blur") {
  const MomentumGrid g(0.5, 40);
  MomentumDistribution delta(g);
  delta.deposit(0.0, 1.0);
  const auto same = detector_blur(delta, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(same.probabilities()[i] == delta.probabilities()[i]);
  const auto box = detector_blur(delta, 0.8);
  CHECK(box.total() == doctest::Approx(1.0).epsilon(1e-12));
  // Centre bin [-0.25, 0.25), neighbours full, next bins 0.05 wide.
  CHECK(box.probabilities()[40] == doctest::Approx(0.5 / 1.6));
  CHECK(box.probabilities()[41] == doctest::Approx(0.5 / 1.6));
  CHECK(box.probabilities()[42] == doctest::Approx(0.05 / 1.6));
  CHECK(box.probabilities()[43] == 0.0);
  CHECK_THROWS_AS(detector_blur(delta, -1.0), std::invalid_argument);
  // Mass near the edge stays on the grid.
  MomentumDistribution edge(g);
  edge.deposit(20.0, 1.0);
  CHECK(detector_blur(edge, 3.0).total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: observables are mirror invariant, blur keeps mass and support") {
  RandomStream rng(41, 0);
  const auto g = MomentumGrid::covering(40.0 * pi);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = random_distribution(rng, g);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(g.center(i)) > rng.uniform(20.0, 120.0)) d.probabilities()[i] = 0.0;
    d.normalize();
    const auto m = d.mirrored();
    CHECK(fraction_outside(m, 10.0 * pi) == doctest::Approx(fraction_outside(d, 10.0 * pi)).epsilon(1e-12));
    CHECK(kinetic_energy(m) == doctest::Approx(kinetic_energy(d)).epsilon(1e-12));
    double last = 101.0;
    for (double rc = 1.0; rc < 130.0; rc += 3.7) {
      const double f = fraction_outside(d, rc);
      CHECK(f <= last + 1e-12);
      last = f;
    }
    const double r = rng.uniform(0.0, 2.0);
    const auto b = detector_blur(d, r);
    CHECK(std::abs(b.total() - d.total()) < 1e-12);
    auto support = [](const MomentumDistribution& x) {
      std::size_t lo = x.size(), hi = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x.probabilities()[i] > 0.0) {
          lo = std::min(lo, i);
          hi = i;
        }
      return hi - lo;
    };
    CHECK(support(b) >= support(d));
    const auto bm = detector_blur(m, r);
    CHECK(fraction_outside(bm, 10.0 * pi) == doctest::Approx(fraction_outside(b, 10.0 * pi)).epsilon(1e-10));
  }
}

TEST_CASE("blur shifts paper-scale fractions by less than 4 points") {
  const auto g = MomentumGrid::covering(40.0 * pi);
  auto shape = distribution_from_density(g, [](double rho) {
    const double a = std::abs(rho);
    return a < 10.0 * pi ? 1.0 : (a < 30.0 * pi ? 0.4 * std::exp(-(a - 10.0 * pi) / 20.0) : 0.0);
  });
  const double before = fraction_outside(shape, 10.0 * pi);
  const double after = fraction_outside(detector_blur(shape, 0.8), 10.0 * pi);
  CHECK(std::abs(after - before) < 4.0);
}

TEST_CASE("curve validation") {
  DiffusionCurve c = DiffusionCurve::from_series({1.0, 2.0}, 0, 0, Engine::classical);
  CHECK_NOTHROW(c.validate());
  c.fraction_outside.push_back(3.0);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = DiffusionCurve::from_series({1.0, 120.0}, 0, 0, Engine::classical);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(to_string(Engine::quantum) == "quantum");
}
