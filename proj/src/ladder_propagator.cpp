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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cantori/quantum.hpp"

namespace cantori {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// -- LadderState -------------------------------------------------------------

LadderState::LadderState(int n_max, double beta, double kbar)
    : n_max_(n_max), beta_(beta), kbar_(kbar) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be > 0");
  set_beta(beta);
  amps_.assign(static_cast<std::size_t>(2 * n_max + 1), complex{0.0, 0.0});
}

LadderState LadderState::basis(int n_max, double beta, double kbar, int n0) {
  LadderState s(n_max, beta, kbar);
  if (std::abs(n0) > n_max) throw std::invalid_argument("initial site outside the ladder");
  s.set_amplitude(n0, 1.0);
  return s;
}

std::size_t LadderState::index(int n) const {
  const int size = static_cast<int>(amps_.size());
  if (n < -n_max_ || n > n_max_) throw std::out_of_range("ladder site out of range");
  return static_cast<std::size_t>(n >= 0 ? n : n + size);
}

double LadderState::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::size_t LadderState::edge_sites_per_side() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.025 * static_cast<double>(amps_.size()))));
}

double LadderState::edge_population() const {
  const int e = static_cast<int>(edge_sites_per_side());
  double s = 0.0;
  for (int j = 0; j < e; ++j) s += population(n_max_ - j) + population(-n_max_ + j);
  return s;
}

void LadderState::shift_sites(int sites) {
  const int size = static_cast<int>(amps_.size());
  int r = sites % size;
  if (r < 0) r += size;
  // Slot order is cyclic in n, so a shift is a rotation.
  std::rotate(amps_.begin(), amps_.begin() + (size - r), amps_.end());
}

void LadderState::set_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
  beta_ = beta;
}

// -- LadderPropagator --------------------------------------------------------

struct LadderPropagator::Impl {
  double k;
  double kbar;
  int n_max;
  std::size_t size;
  // Kinetic durations between consecutive potential steps; there are
  // potential_steps + 1 of them.
  std::vector<double> kinetic_durations;
  std::vector<double> distinct_durations;
  std::vector<std::size_t> duration_slot;
  std::vector<std::vector<complex>> kinetic_tables;
  double cached_beta = -1.0;
  std::vector<complex> potential;  // includes the 1/L of the inverse DFT
  fftw_complex* buffer = nullptr;
  fftw_plan to_angle = nullptr;
  fftw_plan to_momentum = nullptr;

  Impl(const PulseTrain& train, double k_, double kbar_, int n_max_, int substeps)
      : k(k_), kbar(kbar_), n_max(n_max_), size(static_cast<std::size_t>(2 * n_max_ + 1)) {
    if (substeps < 1) throw std::invalid_argument("substeps_per_pulse must be >= 1");
    if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be > 0");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const double w = train.pulse_width();
    const double h = w / substeps;
    const auto edges = train.leading_edges();

    double pending = 0.0;  // kinetic time accumulated since the last potential step
    double t = 0.0;
    for (double e : edges) {
      pending += e - t + 0.5 * h;
      for (int s = 0; s < substeps; ++s) {
        kinetic_durations.push_back(pending);
        pending = (s + 1 < substeps) ? h : 0.5 * h;
      }
      t = e + w;
    }
    pending += 1.0 - t;
    kinetic_durations.push_back(pending);

    for (double d : kinetic_durations) {
      auto it = std::find_if(distinct_durations.begin(), distinct_durations.end(),
                             [&](double x) { return std::abs(x - d) < 1e-15; });
      if (it == distinct_durations.end()) {
        duration_slot.push_back(distinct_durations.size());
        distinct_durations.push_back(d);
      } else {
        duration_slot.push_back(static_cast<std::size_t>(it - distinct_durations.begin()));
      }
    }
    kinetic_tables.assign(distinct_durations.size(), std::vector<complex>(size));

    potential.resize(size);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < size; ++j) {
      const double phi = two_pi * static_cast<double>(j) / static_cast<double>(size);
      potential[j] = std::polar(1.0 / static_cast<double>(size), (k / kbar) * std::cos(phi) * h);
    }

    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(size);
    const int n = static_cast<int>(size);
    to_angle = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    to_momentum = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (to_angle) fftw_destroy_plan(to_angle);
    if (to_momentum) fftw_destroy_plan(to_momentum);
    if (buffer) fftw_free(buffer);
  }

  void refresh_kinetic(double beta) {
    if (beta == cached_beta) return;
    const int L = static_cast<int>(size);
    for (std::size_t d = 0; d < distinct_durations.size(); ++d) {
      auto& table = kinetic_tables[d];
      for (int i = 0; i < L; ++i) {
        const int n = i <= n_max ? i : i - L;
        const double x = n + beta;
        table[static_cast<std::size_t>(i)] = std::polar(1.0, -0.5 * kbar * x * x * distinct_durations[d]);
      }
    }
    cached_beta = beta;
  }

  void apply_kinetic(complex* psi, std::size_t slot) const {
    const complex* table = kinetic_tables[slot].data();
    for (std::size_t i = 0; i < size; ++i) psi[i] *= table[i];
  }

  void evolve(LadderState& state) {
    if (state.n_max() != n_max) throw std::invalid_argument("ladder size does not match propagator");
    if (state.kbar() != kbar) throw std::invalid_argument("kbar does not match propagator");
    refresh_kinetic(state.beta());
    auto* psi = reinterpret_cast<complex*>(buffer);
    std::copy(state.raw().begin(), state.raw().end(), psi);
    const std::size_t steps = kinetic_durations.size() - 1;
    for (std::size_t s = 0; s < steps; ++s) {
      apply_kinetic(psi, duration_slot[s]);
      fftw_execute(to_angle);
      for (std::size_t j = 0; j < size; ++j) psi[j] *= potential[j];
      fftw_execute(to_momentum);
    }
    apply_kinetic(psi, duration_slot[steps]);
    std::copy(psi, psi + size, state.raw().begin());
  }
};

LadderPropagator::LadderPropagator(const PulseTrain& train, double k, double kbar, int n_max,
                                   int substeps_per_pulse)
    : impl_(std::make_unique<Impl>(train, k, kbar, n_max, substeps_per_pulse)) {}

LadderPropagator::~LadderPropagator() = default;
LadderPropagator::LadderPropagator(LadderPropagator&&) noexcept = default;
LadderPropagator& LadderPropagator::operator=(LadderPropagator&&) noexcept = default;

void LadderPropagator::evolve_period(LadderState& state) { impl_->evolve(state); }

int LadderPropagator::n_max() const { return impl_->n_max; }

double LadderPropagator::kick_strength() const { return impl_->k; }

LadderState evolve_period(LadderState state, double k, const PulseTrain& train,
                          int substeps_per_pulse) {
  LadderPropagator prop(train, k, state.kbar(), state.n_max(), substeps_per_pulse);
  prop.evolve_period(state);
  if (state.edge_population() > kEdgeGuardThreshold)
    throw TruncationError("edge guard: population reached the ladder edge");
  return state;
}

}  // namespace cantori
