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
#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cantori/classical.hpp"
#include "cantori/observables.hpp"
#include "cantori/quantum.hpp"

using namespace cantori;
using std::numbers::pi;

namespace {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

// exp(-i G t) for real symmetric G via its eigendecomposition.
CMatrix expm_i(const RMatrix& g, double t) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t)).array().exp();
  const CMatrix v = es.eigenvectors().cast<std::complex<double>>();
  return v * phases.asDiagonal() * v.adjoint();
}

// One period on the cyclic ladder of 2 n_max + 1 sites, sites ordered
// n = -n_max..n_max. The phi grid of the propagator makes cos(phi) the
// cyclic nearest-neighbour hop with amplitude 1/2.
CMatrix reference_period(int n_max, double beta, double kbar, double k, const PulseTrain& train) {
  const int s = 2 * n_max + 1;
  RMatrix kin = RMatrix::Zero(s, s), on = RMatrix::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    const double x = (i - n_max) + beta;
    kin(i, i) = 0.5 * kbar * x * x;
    on(i, (i + 1) % s) -= 0.5 * k / kbar;
    on((i + 1) % s, i) -= 0.5 * k / kbar;
  }
  on += kin;
  CMatrix u = CMatrix::Identity(s, s);
  double t = 0.0;
  for (double e : train.leading_edges()) {
    u = expm_i(kin, e - t) * u;
    u = expm_i(on, train.pulse_width()) * u;
    t = e + train.pulse_width();
  }
  return expm_i(kin, 1.0 - t) * u;
}

Eigen::VectorXcd to_vector(const LadderState& st) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(st.site_count()));
  for (int n = -st.n_max(); n <= st.n_max(); ++n) v(n + st.n_max()) = st.amplitude(n);
  return v;
}

}  // namespace

TEST_CASE("ladder state storage and momenta") {
  auto st = LadderState::basis(8, 0.25, 2.6, -3);
  CHECK(st.site_count() == 17);
  CHECK(st.population(-3) == 1.0);
  CHECK(st.momentum(-3) == doctest::Approx(2.6 * -2.75));
  CHECK(st.norm() == 1.0);
  CHECK(st.edge_sites_per_side() == 1);
  CHECK(st.edge_population() == 0.0);
  st.shift_sites(2);
  CHECK(st.population(-1) == 1.0);
  st.shift_sites(-11);
  CHECK(st.population(5) == 1.0);  // cyclic wrap through -n_max
  CHECK_THROWS_AS(st.set_beta(1.0), std::invalid_argument);
  CHECK_THROWS_AS(LadderState::basis(8, 0.0, 2.6, 9), std::invalid_argument);
  const LadderState big(256, 0.0, 2.6);
  CHECK(big.edge_sites_per_side() == 13);
}

TEST_CASE("split operator matches the matrix exponential on a small ladder") {
  for (double beta : {0.0, 0.3, 0.77}) {
    for (const auto& train : {PulseTrain::double_pulse(), PulseTrain::single_pulse()}) {
      const CMatrix u = reference_period(8, beta, 2.6, 5.0, train);
      LadderPropagator prop(train, 5.0, 2.6, 8, 400);
      for (int n0 : {0, 3, -5}) {
        auto st = LadderState::basis(8, beta, 2.6, n0);
        prop.evolve_period(st);
        const Eigen::VectorXcd exact = u.col(n0 + 8);
        const double fidelity = std::norm(exact.dot(to_vector(st)));
        CHECK(fidelity > 1.0 - 1e-8);
      }
    }
  }
}

TEST_CASE("free evolution only changes phases") {
  auto st = LadderState::basis(16, 0.4, 2.6, 2);
  st.set_amplitude(-1, std::complex<double>(0.0, 1.0));
  const auto before = to_vector(st);
  LadderPropagator prop(PulseTrain::double_pulse(), 0.0, 2.6, 16, 10);
  prop.evolve_period(st);
  for (int n = -16; n <= 16; ++n) {
    const double x = n + 0.4;
    const auto expect = before(n + 16) * std::polar(1.0, -0.5 * 2.6 * x * x);
    CHECK(std::abs(st.amplitude(n) - expect) < 1e-12);
  }
}

TEST_CASE("unitarity over 70 periods") {
  auto st = LadderState::basis(256, 0.37, 2.6, 0);
  LadderPropagator prop(PulseTrain::double_pulse(), 310.0, 2.6, 256, 50);
  for (int i = 0; i < 70; ++i) prop.evolve_period(st);
  CHECK(std::abs(st.norm() - 1.0) < 1e-10);
}

TEST_CASE("edge guard trips on short ladders") {
  const auto st = LadderState::basis(20, 0.1, 2.6, 0);
  LadderState s = st;
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 10; ++i) s = evolve_period(s, 2000.0, PulseTrain::double_pulse(), 20);
      }(),
      TruncationError);
}

TEST_CASE("momentum kicks move beta and carry whole sites") {
  auto st = LadderState::basis(32, 0.25, 2.6, 0);
  const double p0 = st.momentum(0);
  apply_momentum_kick(st, 0.5);
  CHECK(st.beta() == doctest::Approx(0.75));
  CHECK(st.population(0) == 1.0);
  apply_momentum_kick(st, 0.5);
  CHECK(st.beta() == doctest::Approx(0.25));
  CHECK(st.population(1) == 1.0);
  CHECK(st.momentum(1) == doctest::Approx(p0 + 2.6));
  apply_momentum_kick(st, -0.75);
  CHECK(st.beta() == doctest::Approx(0.5));
  CHECK(st.population(0) == 1.0);
  auto edge = LadderState::basis(32, 0.5, 2.6, 31);
  CHECK_THROWS_AS(apply_momentum_kick(edge, 0.9), TruncationError);
}

TEST_CASE("property: recoil preserves total momentum shift and norm") {
  RandomStream rng(21, 0);
  for (int trial = 0; trial < 200; ++trial) {
    auto st = LadderState::basis(40, rng.uniform(), 2.6, static_cast<int>(rng.uniform(-10.0, 10.0)));
    auto mean_momentum = [](const LadderState& s) {
      double m = 0.0;
      for (int n = -s.n_max(); n <= s.n_max(); ++n) m += s.population(n) * s.momentum(n);
      return m;
    };
    const double before = mean_momentum(st);
    const double u = rng.uniform(-1.0, 1.0);
    apply_momentum_kick(st, u);
    CHECK(mean_momentum(st) == doctest::Approx(before + 2.6 * u).epsilon(1e-12).scale(1.0));
    CHECK(st.norm() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("emission probability") {
  RandomStream rng(5, 5);
  auto st = LadderState::basis(32, 0.0, 2.6, 0);
  CHECK(apply_emission(st, {0.0}, rng) == 0.0);
  int events = 0;
  for (int i = 0; i < 20000; ++i) {
    auto s = LadderState::basis(32, 0.5, 2.6, 0);
    const double u = apply_emission(s, {0.3}, rng);
    CHECK(std::abs(u) <= 1.0);
    if (u != 0.0) ++events;
  }
  CHECK(events / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
  for (int i = 0; i < 100; ++i) {
    auto s = LadderState::basis(32, 0.5, 2.6, 0);
    CHECK(apply_emission(s, {1.0}, rng) != 0.0);
  }
}

TEST_CASE("thermal mixture") {
  CHECK_THROWS_AS(init_quantum_mixture(9.2, 2.6, 10, 40, 1), std::invalid_argument);
  const auto mix = init_quantum_mixture(9.2, 2.6, 2000, 64, 3);
  double w = 0.0, s2 = 0.0;
  for (const auto& m : mix.members) {
    w += m.weight;
    s2 += m.weight * m.rho0 * m.rho0;
    int site = 0;
    for (int n = -64; n <= 64; ++n)
      if (m.state.population(n) == 1.0) site = n;
    CHECK(m.state.momentum(site) == doctest::Approx(m.rho0).epsilon(1e-12).scale(1.0));
  }
  CHECK(w == doctest::Approx(1.0));
  CHECK(std::sqrt(s2) == doctest::Approx(9.2).epsilon(0.02));
}

TEST_CASE("quantum simulation is thread-count invariant") {
  const auto mix = init_quantum_mixture(9.2, 2.6, 10, 64, 3);
  DimensionlessParams p{300.0, 2.6, 0.1, 4};
  QuantumOptions one, many;
  one.substeps_per_pulse = many.substeps_per_pulse = 20;
  one.threads = 1;
  many.threads = 3;
  const auto a = simulate_quantum(p, PulseTrain::double_pulse(), mix, one);
  const auto b = simulate_quantum(p, PulseTrain::double_pulse(), mix, many);
  REQUIRE(a.distributions.size() == 5);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(a.fraction_outside[n] == b.fraction_outside[n]);
    CHECK(a.distributions[n].total() == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < a.distributions[n].size(); ++i)
      REQUIRE(a.distributions[n].probabilities()[i] == b.distributions[n].probabilities()[i]);
  }
  CHECK(a.emission_events == b.emission_events);
  CHECK(a.max_norm_drift < 1e-10);
}

TEST_CASE("without kicks the distribution stays put") {
  const auto mix = init_quantum_mixture(9.2, 2.6, 12, 64, 3);
  QuantumOptions opt;
  opt.substeps_per_pulse = 5;
  const auto r = simulate_quantum({0.0, 2.6, 0.0, 3}, PulseTrain::double_pulse(), mix, opt);
  for (std::size_t i = 0; i < r.distributions[0].size(); ++i)
    CHECK(r.distributions[3].probabilities()[i] == doctest::Approx(r.distributions[0].probabilities()[i]).epsilon(1e-12));
  CHECK(r.fraction_outside[3] == doctest::Approx(r.fraction_outside[0]));
}

TEST_CASE("truncation errors name the mixture member") {
  const auto mix = init_quantum_mixture(9.2, 2.6, 3, 56, 3);
  QuantumOptions opt;
  opt.substeps_per_pulse = 10;
  try {
    simulate_quantum({3000.0, 2.6, 0.0, 20}, PulseTrain::double_pulse(), mix, opt);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.member() == 0);
    CHECK(std::string(e.what()).find("member 0") != std::string::npos);
  }
}

namespace {

QuantumRun run_k(double k, double eta, std::size_t members, int n_max, int substeps, std::uint64_t seed = 9) {
  const auto mix = init_quantum_mixture(9.2, 2.6, members, n_max, seed);
  QuantumOptions opt;
  opt.substeps_per_pulse = substeps;
  return simulate_quantum({k, 2.6, eta, 70}, PulseTrain::double_pulse(), mix, opt);
}

double mean_over(const std::vector<double>& v, int first, int last) {
  double s = 0.0;
  for (int n = first; n <= last; ++n) s += v[static_cast<std::size_t>(n)];
  return s / (last - first + 1);
}

}  // namespace

TEST_CASE("invariant: doubling substeps or the ladder barely moves the final fraction") {
  const auto base = run_k(310.0, 0.0, 12, 256, 50);
  const auto fine = run_k(310.0, 0.0, 12, 256, 100);
  const auto wide = run_k(310.0, 0.0, 12, 512, 50);
  CHECK(std::abs(base.fraction_outside.back() - fine.fraction_outside.back()) < 0.2);
  CHECK(std::abs(base.fraction_outside.back() - wide.fraction_outside.back()) < 0.2);
  CHECK(base.max_norm_drift < 1e-10);
}

TEST_CASE("invariant: without emission the quantum curve saturates, with emission it drifts up") {
  const auto pure = run_k(310.0, 0.0, 128, 256, 50);
  CHECK(std::abs(mean_over(pure.fraction_outside, 40, 70) - mean_over(pure.fraction_outside, 20, 40)) < 2.0);
  const auto noisy = run_k(310.0, 0.021, 128, 256, 50);
  CHECK(mean_over(noisy.fraction_outside, 50, 70) > mean_over(noisy.fraction_outside, 20, 40));
}

TEST_CASE("invariant: the quantum fraction never exceeds the classical one by 3 sigma") {
  const auto grid = MomentumGrid::covering(40.0 * pi);
  const std::size_t particles = 4000;
  const auto ens = init_thermal_ensemble(9.2, particles, 17);
  for (double k : {120.0, 240.0, 310.0}) {
    const auto q = run_k(k, 0.0, 16, 256, 50);
    const auto c = evolve_ensemble(ens, k, PulseTrain::double_pulse(), 70, grid);
    for (std::size_t n = 0; n < c.size(); ++n) {
      const double pc = fraction_outside(c[n], 10.0 * pi);
      const double se_c = 100.0 * std::sqrt((pc / 100.0) * (1.0 - pc / 100.0) / particles);
      const double se = std::hypot(se_c, q.fraction_outside_stderr[n]);
      CHECK(q.fraction_outside[n] <= pc + 3.0 * se + 1e-9);
    }
  }
}
