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

#include "cantori/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cantori/parallel.hpp"
#include "cantori/rng.hpp"

namespace cantori {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kahan & Li (1997), s9odr6a.
constexpr std::array<double, 9> kSixthOrderStages = {
    0.39216144400731413928, 0.33259913678935943860, -0.70624617255763935981,
    0.082213596293550800230, 0.79854399093482996340, 0.082213596293550800230,
    -0.70624617255763935981, 0.33259913678935943860, 0.39216144400731413928};

double reduce_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Kick/drift fractions for one sub-pulse with adjacent half-kicks merged:
// kick[0], drift[0], kick[1], ..., drift[m-1], kick[m]. Fractions are of the
// pulse width.
struct PulseSchedule {
  std::vector<double> kick;
  std::vector<double> drift;

  explicit PulseSchedule(const ClassicalIntegrator& integrator) {
    if (integrator.substeps_per_pulse < 1)
      throw std::invalid_argument("substeps_per_pulse must be >= 1");
    std::vector<double> stages;
    if (integrator.order == SplittingOrder::second) {
      stages = {1.0};
    } else {
      stages.assign(kSixthOrderStages.begin(), kSixthOrderStages.end());
    }
    const double h = 1.0 / integrator.substeps_per_pulse;
    kick.push_back(0.0);
    for (int s = 0; s < integrator.substeps_per_pulse; ++s) {
      for (double g : stages) {
        kick.back() += 0.5 * g * h;
        drift.push_back(g * h);
        kick.push_back(0.5 * g * h);
      }
    }
  }
};

class PeriodMap {
 public:
  PeriodMap(const PulseTrain& train, const ClassicalIntegrator& integrator)
      : train_(train), schedule_(integrator) {}

  ClassicalState advance(ClassicalState s, double k, bool backward) const {
    const double w = train_.pulse_width();
    const auto edges = train_.leading_edges();
    if (!backward) {
      double t = 0.0;
      for (double e : edges) {
        s.phi += s.rho * (e - t);
        pulse(s, k * w, w);
        t = e + w;
      }
      s.phi += s.rho * (1.0 - t);
    } else {
      double t = 1.0;
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        s.phi -= s.rho * (t - (*it + w));
        pulse(s, -k * w, -w);
        t = *it;
      }
      s.phi -= s.rho * t;
    }
    return s;
  }

 private:
  // kw and w carry the sign of the time direction.
  void pulse(ClassicalState& s, double kw, double w) const {
    const auto& kick = schedule_.kick;
    const auto& drift = schedule_.drift;
    s.rho -= kw * kick[0] * std::sin(s.phi);
    for (std::size_t i = 0; i < drift.size(); ++i) {
      s.phi += w * drift[i] * s.rho;
      s.rho -= kw * kick[i + 1] * std::sin(s.phi);
    }
  }

  const PulseTrain& train_;
  PulseSchedule schedule_;
};

constexpr std::size_t kMembersPerBlock = 1024;

}  // namespace

ClassicalState advance_period(ClassicalState state, double k, const PulseTrain& train,
                              const ClassicalIntegrator& integrator, bool backward) {
  return PeriodMap(train, integrator).advance(state, k, backward);
}

ClassicalState one_period_map(ClassicalState state, double k, const PulseTrain& train,
                              const ClassicalIntegrator& integrator) {
  ClassicalState s = advance_period(state, k, train, integrator);
  s.phi = reduce_angle(s.phi);
  return s;
}

std::size_t PoincareSection::orbits_crossing(double rho_threshold) const {
  return static_cast<std::size_t>(std::count_if(orbits.begin(), orbits.end(), [&](const OrbitSummary& o) {
    return std::abs(o.initial_rho) < rho_threshold &&
           std::max(o.max_rho, -o.min_rho) > rho_threshold;
  }));
}

std::vector<ClassicalState> seed_grid(std::size_t phi_count, std::size_t rho_count,
                                      double rho_span) {
  if (phi_count == 0 || rho_count == 0) throw std::invalid_argument("seed grid must be non-empty");
  std::vector<ClassicalState> grid;
  grid.reserve(phi_count * rho_count);
  for (std::size_t j = 0; j < rho_count; ++j) {
    const double rho = -rho_span + 2.0 * rho_span * (static_cast<double>(j) + 0.5) / static_cast<double>(rho_count);
    for (std::size_t i = 0; i < phi_count; ++i) {
      grid.push_back({kTwoPi * static_cast<double>(i) / static_cast<double>(phi_count), rho});
    }
  }
  return grid;
}

PoincareSection poincare_section(const std::vector<ClassicalState>& initial_grid, double k,
                                 const PulseTrain& train, int periods,
                                 const ClassicalIntegrator& integrator, unsigned threads,
                                 int record_stride) {
  if (periods < 1) throw std::invalid_argument("periods must be >= 1");
  if (record_stride < 1) throw std::invalid_argument("record stride must be >= 1");
  const PeriodMap map(train, integrator);
  const std::size_t n = initial_grid.size();
  const std::size_t per_orbit = static_cast<std::size_t>(periods / record_stride);

  PoincareSection section;
  section.periods = periods;
  section.orbits.resize(n);
  section.points.resize(n * per_orbit);

  constexpr std::size_t kOrbitsPerBlock = 16;
  const std::size_t blocks = (n + kOrbitsPerBlock - 1) / kOrbitsPerBlock;
  for_each_block(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kOrbitsPerBlock);
    for (std::size_t o = b * kOrbitsPerBlock; o < end; ++o) {
      ClassicalState s = initial_grid[o];
      s.phi = reduce_angle(s.phi);
      OrbitSummary summary{s.rho, s.rho, s.rho};
      std::size_t slot = o * per_orbit;
      for (int p = 1; p <= periods; ++p) {
        s = map.advance(s, k, false);
        s.phi = reduce_angle(s.phi);
        summary.min_rho = std::min(summary.min_rho, s.rho);
        summary.max_rho = std::max(summary.max_rho, s.rho);
        if (p % record_stride == 0 && slot < (o + 1) * per_orbit) {
          section.points[slot++] = {static_cast<float>(s.phi), static_cast<float>(s.rho),
                                    static_cast<std::uint32_t>(o)};
        }
      }
      section.orbits[o] = summary;
    }
  });
  return section;
}

ClassicalEnsemble init_thermal_ensemble(double sigma_rho, std::size_t size, std::uint64_t seed) {
  if (!(sigma_rho > 0.0)) throw std::invalid_argument("sigma_rho must be > 0");
  if (size == 0) throw std::invalid_argument("ensemble size must be >= 1");
  ClassicalEnsemble ens;
  ens.rng_seed = seed;
  ens.states.resize(size);
  ens.weights.assign(size, 1.0 / static_cast<double>(size));
  for (std::size_t i = 0; i < size; ++i) {
    RandomStream rng(seed, i);
    ens.states[i].phi = kTwoPi * rng.uniform();
    ens.states[i].rho = sigma_rho * rng.normal();
  }
  return ens;
}

std::vector<MomentumDistribution> evolve_ensemble(const ClassicalEnsemble& ensemble, double k,
                                                  const PulseTrain& train, int num_kicks,
                                                  const MomentumGrid& grid,
                                                  const EnsembleOptions& options) {
  if (num_kicks < 1) throw std::invalid_argument("number of kicks must be >= 1");
  if (ensemble.states.size() != ensemble.weights.size())
    throw std::invalid_argument("ensemble states and weights differ in length");
  const PeriodMap map(train, options.integrator);
  const std::size_t n = ensemble.states.size();
  const std::size_t blocks = (n + kMembersPerBlock - 1) / kMembersPerBlock;
  const auto series_len = static_cast<std::size_t>(num_kicks) + 1;

  std::vector<std::vector<MomentumDistribution>> partial(
      blocks, std::vector<MomentumDistribution>(series_len, MomentumDistribution(grid)));

  for_each_block(blocks, options.threads, [&](std::size_t b) {
    auto& series = partial[b];
    const std::size_t end = std::min(n, (b + 1) * kMembersPerBlock);
    for (std::size_t i = b * kMembersPerBlock; i < end; ++i) {
      double k_member = k;
      if (options.kick_rms_spread > 0.0) {
        RandomStream rng(ensemble.rng_seed ^ 0x6b69636b73707264ULL, i);
        k_member = std::max(0.0, k * (1.0 + options.kick_rms_spread * rng.normal()));
      }
      const double w = ensemble.weights[i];
      ClassicalState s = ensemble.states[i];
      series[0].deposit(s.rho, w);
      for (std::size_t kick = 1; kick < series_len; ++kick) {
        s = map.advance(s, k_member, false);
        s.phi = reduce_angle(s.phi);
        series[kick].deposit(s.rho, w);
      }
    }
  });

  std::vector<MomentumDistribution> out(series_len, MomentumDistribution(grid));
  for (const auto& series : partial) {
    for (std::size_t kick = 0; kick < series_len; ++kick) out[kick] += series[kick];
  }
  return out;
}

FluxEstimate cantorus_flux(double k, const PulseTrain& train, double rho_c, std::size_t samples,
                           double kbar, const ClassicalIntegrator& integrator, unsigned threads) {
  if (samples < 1000) throw std::invalid_argument("flux estimate needs at least 1000 samples");
  if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be > 0");
  const PeriodMap map(train, integrator);

  std::vector<ClassicalState> image(samples + 1);
  const std::size_t blocks = (samples + kMembersPerBlock - 1) / kMembersPerBlock;
  for_each_block(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(samples, (b + 1) * kMembersPerBlock);
    for (std::size_t i = b * kMembersPerBlock; i < end; ++i) {
      const double phi0 = kTwoPi * static_cast<double>(i) / static_cast<double>(samples);
      image[i] = map.advance({phi0, rho_c}, k, false);
    }
  });
  // The line is closed: the last node is the first one shifted by 2 pi.
  image[samples] = {image[0].phi + kTwoPi, image[0].rho};

  double positive = 0.0;
  double net = 0.0;
  double sum_sq = 0.0;
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double d0 = image[i].rho - rho_c;
    const double d1 = image[i + 1].rho - rho_c;
    const double dphi = image[i + 1].phi - image[i].phi;
    double above;  // integral of max(d, 0) over the segment, per unit dphi
    if (d0 >= 0.0 && d1 >= 0.0) {
      above = 0.5 * (d0 + d1);
    } else if (d0 <= 0.0 && d1 <= 0.0) {
      above = 0.0;
    } else {
      const double hi = std::max(d0, d1);
      const double lo = std::min(d0, d1);
      above = hi * hi / (2.0 * (hi - lo));
    }
    const double contribution = above * dphi;
    positive += contribution;
    net += 0.5 * (d0 + d1) * dphi;
    sum_sq += (n * contribution) * (n * contribution);
  }
  // Per-segment contributions scaled by n average to the flux itself.
  const double var = std::max(0.0, sum_sq / n - positive * positive);
  const double sd = std::sqrt(var * n / std::max(1.0, n - 1.0));

  FluxEstimate est;
  est.k = k;
  est.flux = std::max(0.0, positive);
  est.flux_in_kbar = est.flux / kbar;
  est.net_flux_in_kbar = net / kbar;
  est.sample_count = samples;
  est.statistical_error = sd / std::sqrt(n) / kbar;
  return est;
}

}  // namespace cantori
