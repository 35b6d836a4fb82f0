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

#include <cstdint>
#include <vector>

#include "cantori/momentum_distribution.hpp"
#include "cantori/pulse_train.hpp"

namespace cantori {

struct ClassicalState {
  double phi = 0.0;  ///< angle, kept in [0, 2 pi) by one_period_map
  double rho = 0.0;  ///< momentum, never wrapped
};

enum class SplittingOrder {
  second,  ///< plain velocity leapfrog (kick-drift-kick)
  sixth,   ///< 9-stage symmetric composition of leapfrog (Kahan & Li)
};

/// Integration settings inside the sub-pulses. Gaps are always drifted
/// exactly.
struct ClassicalIntegrator {
  int substeps_per_pulse = 30;
  SplittingOrder order = SplittingOrder::sixth;
};

/// One period of d(phi)/dt = rho, d(rho)/dt = -k sin(phi) f(t), starting at
/// t = 0. Returns the state with phi reduced into [0, 2 pi).
ClassicalState one_period_map(ClassicalState state, double k, const PulseTrain& train,
                              const ClassicalIntegrator& integrator = {});

/// Same flow without reducing phi, so neighbouring trajectories stay
/// continuous. `backward` runs the period in reverse (t from 1 to 0).
ClassicalState advance_period(ClassicalState state, double k, const PulseTrain& train,
                              const ClassicalIntegrator& integrator, bool backward = false);

// -- Poincare sections -------------------------------------------------------

struct PoincarePoint {
  float phi;
  float rho;
  std::uint32_t orbit;
};

struct OrbitSummary {
  double initial_rho = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
};

/// Stroboscopic samples at integer times. points holds every recorded
/// (phi, rho) with the index of the seed orbit it came from.
struct PoincareSection {
  std::vector<PoincarePoint> points;
  std::vector<OrbitSummary> orbits;
  int periods = 0;

  /// Orbits whose |rho| ever exceeded `rho_threshold` having started below it.
  std::size_t orbits_crossing(double rho_threshold) const;
};

/// Uniform seed grid: phi_count angles over [0, 2 pi) times rho_count
/// momenta spread evenly over the open interval (-rho_span, rho_span).
std::vector<ClassicalState> seed_grid(std::size_t phi_count, std::size_t rho_count,
                                      double rho_span);

/// `record_stride` keeps every n-th period in `points`; orbit summaries
/// always see every period.
PoincareSection poincare_section(const std::vector<ClassicalState>& initial_grid, double k,
                                 const PulseTrain& train, int periods,
                                 const ClassicalIntegrator& integrator = {},
                                 unsigned threads = 0, int record_stride = 1);

// -- ensembles ---------------------------------------------------------------

struct ClassicalEnsemble {
  std::vector<ClassicalState> states;
  std::vector<double> weights;
  std::uint64_t rng_seed = 0;
};

/// phi uniform on [0, 2 pi), rho ~ N(0, sigma_rho^2), equal weights. Member i
/// draws from its own (seed, i) stream.
ClassicalEnsemble init_thermal_ensemble(double sigma_rho, std::size_t size, std::uint64_t seed);

struct EnsembleOptions {
  ClassicalIntegrator integrator{};
  /// Relative rms spread of k across members (0 disables). Member k values
  /// are k (1 + spread g), g standard normal from the member's stream.
  double kick_rms_spread = 0.0;
  unsigned threads = 0;
};

/// Distributions after each period; element n is after n kicks (element 0 is
/// the initial ensemble).
std::vector<MomentumDistribution> evolve_ensemble(const ClassicalEnsemble& ensemble, double k,
                                                  const PulseTrain& train, int num_kicks,
                                                  const MomentumGrid& grid,
                                                  const EnsembleOptions& options = {});

// -- turnstile flux ----------------------------------------------------------

struct FluxEstimate {
  double k = 0.0;
  double flux = 0.0;             ///< phase-space area per period, rho units
  double flux_in_kbar = 0.0;     ///< flux / kbar
  double net_flux_in_kbar = 0.0; ///< signed area; zero for an area-preserving map
  std::size_t sample_count = 0;
  double statistical_error = 0.0;  ///< in kbar units
};

/// Phase-space area carried above rho_c in one period.
///
/// The line rho = rho_c is sampled at `samples` evenly spaced angles and
/// mapped through one period. The flux is the area enclosed between the
/// image curve and the line where the image lies above it,
///
///   F = integral over the image curve of max(rho - rho_c, 0) d(phi),
///
/// evaluated segment by segment with linear interpolation. The error is the
/// spread of the per-segment contributions over sqrt(samples).
FluxEstimate cantorus_flux(double k, const PulseTrain& train, double rho_c, std::size_t samples,
                           double kbar, const ClassicalIntegrator& integrator = {},
                           unsigned threads = 0);

}  // namespace cantori
