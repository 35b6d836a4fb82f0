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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cantori/classical.hpp"
#include "cantori/config.hpp"

namespace cantori {

struct RunOptions {
  unsigned threads = 0;
  /// Progress lines go here when set.
  std::ostream* log = nullptr;
};

struct CurveSummary {
  std::string label;
  std::string engine;
  std::string train;
  double k = 0.0;
  double eta = 0.0;
  std::vector<double> percent;         ///< fraction outside rho_c after n kicks
  std::vector<double> percent_stderr;
  std::optional<int> break_time;
  double late_slope = 0.0;
};

struct PoincareSummary {
  std::string label;
  double k = 0.0;
  std::size_t orbits = 0;
  std::size_t crossing_inner = 0;  ///< orbits reaching |rho| >= rho_c
  std::size_t crossing_outer = 0;  ///< orbits reaching |rho| >= rho_outer
};

struct ExperimentResult {
  std::vector<std::string> files;
  std::vector<CurveSummary> curves;
  std::vector<FluxEstimate> fluxes;
  std::optional<double> flux_loglog_slope;
  std::vector<PoincareSummary> sections;
  double wall_time_s = 0.0;
};

/// Runs every (train, k, eta) combination of the config through its engine
/// and writes `<output>.csv` (or .tsv), `<output>.json` and, for diffusion
/// engines, `<output>_lineshape.csv`. Data files depend only on the config.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Least-squares slope of ln(flux) against ln(k).
double loglog_slope(const std::vector<FluxEstimate>& fluxes);

/// printf-style "%.9g".
std::string format_number(double v);

std::string version_string();

}  // namespace cantori
