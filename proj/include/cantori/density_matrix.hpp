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

#include "cantori/pulse_train.hpp"

namespace cantori {

/// Small-ladder comparison between an exact mixed-state evolution and the
/// stochastic wavefunction average used by simulate_quantum.
///
/// The mixed state is kept as one density matrix per quasimomentum sector
/// beta_j = j / beta_sectors. Each period applies the sector's unitary, then
/// the emission channel
///
///   rho -> (1 - eta) rho + eta * integral_{-1}^{1} du/2  T_u rho T_u^dagger
///
/// with the u integral done by composite Simpson on the nodes u = m /
/// beta_sectors, which map sectors onto sectors. The trajectories draw u
/// continuously, so agreement needs enough sectors to resolve the beta
/// dependence of the populations. Momentum bins are whole
/// ladder spacings [kbar n, kbar (n + 1)); sector-0 populations sit exactly
/// on a bin edge and are split evenly between the two neighbouring bins.
struct CrosscheckParams {
  double k = 5.0;
  double kbar = 2.6;
  double eta = 0.0;
  int num_kicks = 5;
  int n_max = 8;  ///< ladder has 2 n_max + 1 <= 32 sites
  int substeps_per_pulse = 40;
  PulseTrain train = PulseTrain::double_pulse();
  int beta_sectors = 256;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Standard scores skip bins whose exact probability is below this. Deep
  /// tails are fed by rare multi-emission paths and their sample means are
  /// far from normal at practical sample counts.
  double score_floor = 1e-4;

  struct Member {
    int n0 = 0;
    int sector = 1;  ///< initial beta = sector / beta_sectors; must be nonzero
  };
  /// Equal-weight initial members.
  std::vector<Member> members = {{0, 64}, {0, 128}, {1, 192}};

  void validate() const;
};

struct CrosscheckReport {
  std::vector<int> sites;                  ///< bin n covers [kbar n, kbar (n + 1))
  std::vector<double> exact;               ///< mixed-state probabilities per bin
  std::vector<double> monte_carlo;         ///< trajectory averages per bin
  std::vector<double> monte_carlo_stderr;  ///< standard error per bin
  double max_discrepancy = 0.0;            ///< max |exact - monte_carlo|
  /// max |exact - monte_carlo| / stderr over bins with nonzero stderr and
  /// exact probability >= score_floor.
  double max_standard_score = 0.0;
  double max_stderr = 0.0;
};

CrosscheckReport density_matrix_crosscheck(const CrosscheckParams& params);

}  // namespace cantori
