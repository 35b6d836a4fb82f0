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

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantori/lab_units.hpp"
#include "cantori/momentum_distribution.hpp"
#include "cantori/pulse_train.hpp"
#include "cantori/rng.hpp"

namespace cantori {

using complex = std::complex<double>;

/// Population allowed in the outermost 5% of ladder sites.
inline constexpr double kEdgeGuardThreshold = 1e-8;

/// The ladder was too short: population reached its edges.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, long member = -1)
      : std::runtime_error(what), member_(member) {}
  /// Index of the mixture member that failed, or -1.
  long member() const { return member_; }

 private:
  long member_;
};

/// Amplitudes on the momentum ladder rho = kbar (n + beta), n in
/// [-n_max, n_max]. Storage follows DFT order (site n at index n mod L) so
/// the propagator can transform in place.
class LadderState {
 public:
  LadderState(int n_max, double beta, double kbar);

  /// All population on site n0.
  static LadderState basis(int n_max, double beta, double kbar, int n0);

  int n_max() const { return n_max_; }
  std::size_t site_count() const { return amps_.size(); }
  double beta() const { return beta_; }
  double kbar() const { return kbar_; }

  complex amplitude(int n) const { return amps_[index(n)]; }
  void set_amplitude(int n, complex a) { amps_[index(n)] = a; }
  double population(int n) const { return std::norm(amps_[index(n)]); }
  double momentum(int n) const { return kbar_ * (n + beta_); }

  double norm() const;
  /// Population on the outermost 5% of sites (at least one site per side).
  double edge_population() const;
  std::size_t edge_sites_per_side() const;

  /// Shift every amplitude by `sites` ladder steps (cyclically).
  void shift_sites(int sites);
  void set_beta(double beta);

  /// Raw amplitudes in DFT order.
  std::span<complex> raw() { return amps_; }
  std::span<const complex> raw() const { return amps_; }

  /// Site index of storage slot i.
  int site_of_slot(std::size_t i) const {
    const int m = static_cast<int>(i);
    return m <= n_max_ ? m : m - static_cast<int>(amps_.size());
  }

 private:
  std::size_t index(int n) const;

  int n_max_;
  double beta_;
  double kbar_;
  std::vector<complex> amps_;
};

/// Split-operator propagator for one period at fixed k, train and ladder
/// size. Caches kinetic phase tables for the current beta. Owns FFT buffers,
/// so each thread needs its own instance.
class LadderPropagator {
 public:
  LadderPropagator(const PulseTrain& train, double k, double kbar, int n_max,
                   int substeps_per_pulse);
  ~LadderPropagator();
  LadderPropagator(LadderPropagator&&) noexcept;
  LadderPropagator& operator=(LadderPropagator&&) noexcept;

  /// Advances one full period in place. Gaps get exact kinetic phases; each
  /// sub-pulse gets Strang steps half-kinetic / potential / half-kinetic
  /// with the potential exp(i (k/kbar) cos(phi) dt) applied on the phi grid.
  void evolve_period(LadderState& state);

  int n_max() const;
  double kick_strength() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience form of LadderPropagator::evolve_period. Throws
/// TruncationError when the edge guard trips.
LadderState evolve_period(LadderState state, double k, const PulseTrain& train,
                          int substeps_per_pulse);

/// Spontaneous emission as a random recoil u kbar, u uniform on [-1, 1],
/// occurring with probability eta per kick cycle.
struct EmissionModel {
  double eta = 0.0;

  void validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  }
};

/// Shifts total momentum by u kbar: beta <- frac(beta + u), the integer
/// carry moves the amplitudes along the ladder.
void apply_momentum_kick(LadderState& state, double u);

/// With probability eta, draws u and applies the recoil. Returns the recoil
/// u that was applied, or 0 when no photon was scattered.
double apply_emission(LadderState& state, const EmissionModel& model, RandomStream& rng);

struct MixtureMember {
  double weight = 0.0;
  double rho0 = 0.0;
  LadderState state;
};

struct ThermalMixture {
  std::vector<MixtureMember> members;
  std::uint64_t rng_seed = 0;
  double kbar = 0.0;
  int n_max = 0;
};

/// Stratified Gaussian sample of initial momenta, each split into a ladder
/// site n0 and quasimomentum beta. Requires kbar * n_max > 30 pi + 5 sigma.
ThermalMixture init_quantum_mixture(double sigma_rho, double kbar, std::size_t member_count,
                                    int n_max, std::uint64_t seed);

struct QuantumOptions {
  int substeps_per_pulse = 50;
  unsigned threads = 0;
  /// Relative rms spread of k across members (0 disables).
  double kick_rms_spread = 0.0;
  /// Barrier used for the per-member crossing statistics.
  double rho_c = 10.0 * 3.14159265358979323846;
  /// Bin width for the output distributions.
  double bin_width = kDefaultBinWidth;
};

struct QuantumRun {
  /// Element n is the mixture distribution after n kicks.
  std::vector<MomentumDistribution> distributions;
  /// Percent of probability beyond |rho| > rho_c, from exact site momenta,
  /// and its standard error across members.
  std::vector<double> fraction_outside;
  std::vector<double> fraction_outside_stderr;
  /// Largest per-member norm drift seen after the final kick.
  double max_norm_drift = 0.0;
  std::size_t emission_events = 0;
};

/// Evolves every mixture member through params.num_kicks periods, with an
/// emission step after each period, and accumulates the weighted momentum
/// distribution. Member i draws emissions from the (seed, i) stream.
QuantumRun simulate_quantum(const DimensionlessParams& params, const PulseTrain& train,
                            const ThermalMixture& mixture, const QuantumOptions& options = {});

}  // namespace cantori
