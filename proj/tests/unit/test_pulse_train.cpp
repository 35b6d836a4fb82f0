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
#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cantori/pulse_train.hpp"
#include "cantori/rng.hpp"

using namespace cantori;
using std::numbers::pi;

namespace {

// 30-point Gauss-Legendre on panels no longer than 0.01.
template <class F>
double composite_gauss(F f, double a, double b) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.01)));
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i)
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, a + i * h, a + (i + 1) * h);
  return sum;
}

// Direct quadrature of f(t) cos(2 pi r (t - t0)) over each pulse interval.
double quadrature_cos(int r, const PulseTrain& train, double t0) {
  double sum = 0.0;
  for (double e : train.leading_edges()) {
    auto f = [&](double t) { return std::cos(2.0 * pi * r * (t - t0)); };
    sum += composite_gauss(f, e, e + train.pulse_width());
  }
  return sum;
}

double quadrature_sin(int r, const PulseTrain& train, double t0) {
  double sum = 0.0;
  for (double e : train.leading_edges()) {
    auto f = [&](double t) { return std::sin(2.0 * pi * r * (t - t0)); };
    sum += composite_gauss(f, e, e + train.pulse_width());
  }
  return sum;
}

// Random valid train: 1..4 pulses, non-overlapping, fitting in the period.
PulseTrain random_train(RandomStream& rng) {
  const int count = 1 + static_cast<int>(rng.uniform() * 4.0);
  const double width = rng.uniform(0.01, 0.8 / count);
  const double slack = 1.0 - count * width;
  std::vector<double> gaps(static_cast<std::size_t>(count) + 1);
  double total = 0.0;
  for (double& g : gaps) total += (g = rng.uniform());
  std::vector<double> edges;
  double t = 0.0;
  for (int i = 0; i < count; ++i) {
    t += slack * gaps[static_cast<std::size_t>(i)] / total;
    edges.push_back(t);
    t += width;
  }
  return PulseTrain(width, edges);
}

}  // namespace

TEST_CASE("pulse envelope on the double train") {
  const auto d = PulseTrain::double_pulse();
  CHECK(pulse_envelope(0.01, d) == 1);
  CHECK(pulse_envelope(0.07, d) == 0);
  CHECK(pulse_envelope(0.12, d) == 1);
  CHECK(pulse_envelope(1.01, d) == 1);
  CHECK(pulse_envelope(-0.99, d) == 1);
  CHECK(pulse_envelope(-0.95, d) == 0);
  CHECK(pulse_envelope(0.05, d) == 0);
  CHECK(pulse_envelope(0.5, d) == 0);
}

TEST_CASE("canonical trains") {
  const auto d = PulseTrain::double_pulse();
  CHECK(d.pulse_width() == doctest::Approx(0.05));
  REQUIRE(d.pulse_count() == 2);
  CHECK(d.leading_edges()[1] == doctest::Approx(0.1));
  const auto s = PulseTrain::single_pulse();
  CHECK(s.pulse_width() == doctest::Approx(0.1));
  CHECK(s.total_area() == doctest::Approx(d.total_area()));
}

TEST_CASE("invalid trains are rejected") {
  CHECK_THROWS_AS(PulseTrain(0.0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(1.0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(0.1, {}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(0.1, {0.0, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(0.1, {0.95}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(0.1, {0.35, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(PulseTrain(0.1, {-0.1}), std::invalid_argument);
}

TEST_CASE("fourier coefficients of the double train") {
  const auto d = PulseTrain::double_pulse();
  CHECK(fourier_coefficient(0, d) == 0.1);
  CHECK(std::abs(fourier_coefficient(5, d)) < 1e-12);
  CHECK(std::abs(fourier_coefficient(15, d)) < 1e-12);
  CHECK(fourier_coefficient(10, d) == doctest::Approx(-1.0 / (5.0 * pi)).epsilon(1e-12));
  for (int r = 1; r <= 60; ++r) {
    const double closed = (std::sin(3.0 * r * pi / 20.0) - std::sin(r * pi / 20.0)) / (r * pi);
    CHECK(fourier_coefficient(r, d) == doctest::Approx(closed).epsilon(1e-12).scale(1.0));
    CHECK(fourier_coefficient(r, d) == doctest::Approx(quadrature_cos(r, d, d.reference_time())).epsilon(1e-10).scale(1.0));
    CHECK(std::abs(fourier_sine_coefficient(r, d)) < 1e-12);
  }
}

TEST_CASE("kam boundaries") {
  const auto d = PulseTrain::double_pulse();
  const auto s = PulseTrain::single_pulse();
  auto kd = kam_boundaries(d, 20);
  REQUIRE(kd.size() == 2);
  CHECK(kd[0] == doctest::Approx(10.0 * pi));
  CHECK(kd[1] == doctest::Approx(30.0 * pi));
  auto ks = kam_boundaries(s, 20);
  REQUIRE(ks.size() == 1);
  CHECK(ks[0] == doctest::Approx(20.0 * pi));
  auto narrow = kam_boundaries(PulseTrain(1.0 / 20.0, {0.0}), 21);
  REQUIRE(narrow.size() == 1);
  CHECK(narrow[0] == doctest::Approx(40.0 * pi));
  CHECK_THROWS_AS(kam_boundaries(d, 0), std::invalid_argument);
  // r_max itself is excluded: the double train also vanishes at r = 20.
  CHECK(kam_boundaries(d, 21).size() == 3);

  // The two systems share no barrier below 40 pi.
  for (double a : kam_boundaries(d, 19))
    for (double b : kam_boundaries(s, 19)) CHECK(std::abs(a - b) > 1e-9);
}

TEST_CASE("property: quadrature reproduces coefficients of random trains") {
  RandomStream rng(2024, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const PulseTrain t = random_train(rng);
    const double t0 = t.reference_time();
    CHECK(fourier_coefficient(0, t) == doctest::Approx(t.total_area()).epsilon(1e-12));
    for (int r = -50; r <= 50; ++r) {
      CHECK(std::abs(fourier_coefficient(r, t) - quadrature_cos(r, t, t0)) < 1e-10);
      CHECK(std::abs(fourier_sine_coefficient(r, t) - quadrature_sin(r, t, t0)) < 1e-10);
      CHECK(fourier_coefficient(-r, t) == doctest::Approx(fourier_coefficient(r, t)).epsilon(1e-12).scale(1.0));
      if (r != 0) CHECK(fourier_magnitude(r, t) <= t.pulse_count() / (pi * std::abs(r)) + 1e-12);
    }
  }
}

TEST_CASE("property: trains symmetric about their midpoint have no sine part") {
  RandomStream rng(77, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = rng.uniform(0.01, 0.2);
    const double gap = rng.uniform(0.0, 1.0 - 2.0 * w);
    const PulseTrain t(w, {0.0, w + gap});
    for (int r = 1; r <= 30; ++r) CHECK(std::abs(fourier_sine_coefficient(r, t)) < 1e-12);
  }
}
