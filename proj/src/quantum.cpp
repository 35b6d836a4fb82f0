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

#include "cantori/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "cantori/parallel.hpp"

namespace cantori {

void apply_momentum_kick(LadderState& state, double u) {
  const double shifted = state.beta() + u;
  const double carry = std::floor(shifted);
  double beta = shifted - carry;
  if (beta >= 1.0) beta = 0.0;  // rounding at the upper end
  state.shift_sites(static_cast<int>(carry));
  state.set_beta(beta);
  if (state.edge_population() > kEdgeGuardThreshold)
    throw TruncationError("edge guard: recoil pushed population to the ladder edge");
}

double apply_emission(LadderState& state, const EmissionModel& model, RandomStream& rng) {
  if (model.eta <= 0.0 || !rng.bernoulli(model.eta)) return 0.0;
  const double u = rng.uniform(-1.0, 1.0);
  apply_momentum_kick(state, u);
  return u;
}

ThermalMixture init_quantum_mixture(double sigma_rho, double kbar, std::size_t member_count,
                                    int n_max, std::uint64_t seed) {
  if (member_count == 0) throw std::invalid_argument("mixture needs at least one member");
  if (!(sigma_rho > 0.0)) throw std::invalid_argument("sigma_rho must be > 0");
  if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be > 0");
  const double headroom = 30.0 * std::numbers::pi + 5.0 * sigma_rho;
  if (!(kbar * n_max > headroom))
    throw std::invalid_argument("n_max too small: need kbar * n_max > 30 pi + 5 sigma_rho (" +
                                std::to_string(headroom) + ")");

  ThermalMixture mix;
  mix.rng_seed = seed;
  mix.kbar = kbar;
  mix.n_max = n_max;
  mix.members.reserve(member_count);
  const double m = static_cast<double>(member_count);
  for (std::size_t i = 0; i < member_count; ++i) {
    RandomStream rng(seed, i);
    const double p = (static_cast<double>(i) + rng.open_uniform()) / m;
    const double rho0 = sigma_rho * RandomStream::standard_normal_quantile(p);
    const double x = rho0 / kbar;
    const double n0 = std::floor(x);
    double beta = x - n0;
    if (beta >= 1.0) beta = 0.0;
    mix.members.push_back({1.0 / m, rho0,
                           LadderState::basis(n_max, beta, kbar, static_cast<int>(n0))});
  }
  return mix;
}

namespace {

constexpr std::size_t kQuantumMembersPerBlock = 4;

struct BlockResult {
  std::vector<MomentumDistribution> distributions;
  std::vector<double> sum_w;
  std::vector<double> sum_wf;
  std::vector<double> sum_wff;
  double sum_w2 = 0.0;
  double max_norm_drift = 0.0;
  std::size_t emission_events = 0;
};

// Stream ids above this offset are reserved for per-member kick spreads.
constexpr std::uint64_t kSpreadStream = 0x8000000000000000ULL;

}  // namespace

QuantumRun simulate_quantum(const DimensionlessParams& params, const PulseTrain& train,
                            const ThermalMixture& mixture, const QuantumOptions& options) {
  params.validate();
  if (mixture.members.empty()) throw std::invalid_argument("empty mixture");
  if (std::abs(mixture.kbar - params.kbar) > 1e-12 * params.kbar)
    throw std::invalid_argument("mixture kbar differs from params.kbar");
  const EmissionModel emission{params.eta};

  const auto series_len = static_cast<std::size_t>(params.num_kicks) + 1;
  const MomentumGrid grid =
      MomentumGrid::covering(params.kbar * (mixture.n_max + 1), options.bin_width);
  const std::size_t n_members = mixture.members.size();
  const std::size_t blocks = (n_members + kQuantumMembersPerBlock - 1) / kQuantumMembersPerBlock;

  QuantumRun run;
  run.distributions.assign(series_len, MomentumDistribution(grid));
  std::vector<double> sum_w(series_len, 0.0), sum_wf(series_len, 0.0), sum_wff(series_len, 0.0);
  double sum_w2 = 0.0;

  auto produce = [&](std::size_t b) {
    BlockResult r;
    r.distributions.assign(series_len, MomentumDistribution(grid));
    r.sum_w.assign(series_len, 0.0);
    r.sum_wf.assign(series_len, 0.0);
    r.sum_wff.assign(series_len, 0.0);
    std::optional<LadderPropagator> shared;
    if (options.kick_rms_spread <= 0.0)
      shared.emplace(train, params.kick_strength, params.kbar, mixture.n_max,
                     options.substeps_per_pulse);

    const std::size_t end = std::min(n_members, (b + 1) * kQuantumMembersPerBlock);
    for (std::size_t i = b * kQuantumMembersPerBlock; i < end; ++i) {
      const MixtureMember& member = mixture.members[i];
      std::optional<LadderPropagator> own;
      LadderPropagator* prop = shared ? &*shared : nullptr;
      if (!prop) {
        RandomStream spread_rng(mixture.rng_seed, kSpreadStream + i);
        const double k_member =
            std::max(0.0, params.kick_strength * (1.0 + options.kick_rms_spread * spread_rng.normal()));
        own.emplace(train, k_member, params.kbar, mixture.n_max, options.substeps_per_pulse);
        prop = &*own;
      }
      RandomStream rng(mixture.rng_seed, i);
      LadderState state = member.state;
      const double w = member.weight;
      r.sum_w2 += w * w;

      auto record = [&](std::size_t kick) {
        double outside = 0.0;
        auto& dist = r.distributions[kick];
        const auto amps = state.raw();
        for (std::size_t slot = 0; slot < amps.size(); ++slot) {
          const double p = std::norm(amps[slot]);
          if (p == 0.0) continue;
          const double rho = state.momentum(state.site_of_slot(slot));
          dist.deposit(rho, w * p);
          if (std::abs(rho) > options.rho_c) outside += p;
        }
        const double f = 100.0 * outside;
        r.sum_w[kick] += w;
        r.sum_wf[kick] += w * f;
        r.sum_wff[kick] += w * f * f;
      };

      record(0);
      try {
        for (std::size_t kick = 1; kick < series_len; ++kick) {
          prop->evolve_period(state);
          if (state.edge_population() > kEdgeGuardThreshold)
            throw TruncationError("edge guard: population reached the ladder edge after kick " +
                                  std::to_string(kick));
          if (apply_emission(state, emission, rng) != 0.0) ++r.emission_events;
          r.max_norm_drift = std::max(r.max_norm_drift, std::abs(state.norm() - 1.0));
          record(kick);
        }
      } catch (const TruncationError& e) {
        throw TruncationError(std::string(e.what()) + " (mixture member " + std::to_string(i) + ")",
                              static_cast<long>(i));
      }
    }
    return r;
  };

  auto consume = [&](BlockResult&& r) {
    for (std::size_t kick = 0; kick < series_len; ++kick) {
      run.distributions[kick] += r.distributions[kick];
      sum_w[kick] += r.sum_w[kick];
      sum_wf[kick] += r.sum_wf[kick];
      sum_wff[kick] += r.sum_wff[kick];
    }
    sum_w2 += r.sum_w2;
    run.max_norm_drift = std::max(run.max_norm_drift, r.max_norm_drift);
    run.emission_events += r.emission_events;
  };

  for_each_block_ordered(blocks, options.threads, produce, consume);

  run.fraction_outside.resize(series_len);
  run.fraction_outside_stderr.resize(series_len);
  const double w_total = sum_w[0];
  const double n_eff = w_total * w_total / sum_w2;
  for (std::size_t kick = 0; kick < series_len; ++kick) {
    const double mean = sum_wf[kick] / sum_w[kick];
    const double var = std::max(0.0, sum_wff[kick] / sum_w[kick] - mean * mean);
    run.fraction_outside[kick] = mean;
    run.fraction_outside_stderr[kick] = n_eff > 1.0 ? std::sqrt(var / (n_eff - 1.0)) : 0.0;
  }
  for (auto& d : run.distributions) d *= 1.0 / w_total;
  return run;
}

}  // namespace cantori
