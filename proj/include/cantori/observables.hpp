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
#include <string>
#include <vector>

#include "cantori/momentum_distribution.hpp"

namespace cantori {

/// Percent of probability with |rho| > rho_c. Bins straddling +-rho_c are
/// split linearly.
double fraction_outside(const MomentumDistribution& dist, double rho_c);

/// sum p(rho) rho^2 / 2 over bin centres.
double kinetic_energy(const MomentumDistribution& dist);

/// Mean probability density per unit rho over lo <= |rho| < hi, both signs.
double window_density(const MomentumDistribution& dist, double lo, double hi);

struct FitWindow {
  double lo = 20.0;
  double hi = 60.0;
};

struct LocalizationFit {
  double l_rho = 0.0;       ///< mean of the two wing estimates
  double l_positive = 0.0;  ///< from rho > 0
  double l_negative = 0.0;  ///< from rho < 0
  double rms_residual = 0.0;  ///< worst wing, in units of ln p
  bool non_exponential = false;
};

/// Least-squares fit of ln p against |rho| on each wing over the window;
/// l_rho = -2 / slope. Empty bins are skipped. Flags non_exponential when a
/// wing's rms residual exceeds residual_threshold.
LocalizationFit fit_localization_length(const MomentumDistribution& dist, FitWindow window = {},
                                        double residual_threshold = 0.25);

/// kappa^2 / (2 kbar).
inline double localization_length_estimate(double kappa, double kbar) {
  return kappa * kappa / (2.0 * kbar);
}

enum class Engine { classical, quantum };

std::string to_string(Engine e);

struct DiffusionCurve {
  std::vector<int> kicks;
  std::vector<double> fraction_outside;  ///< percent
  double k = 0.0;
  double eta = 0.0;
  Engine engine = Engine::classical;

  /// Curve with kicks 0, 1, ..., n - 1.
  static DiffusionCurve from_series(std::vector<double> percent, double k, double eta,
                                    Engine engine);
  void validate() const;
};

enum class SaturationReference {
  /// Constant late-time mean, saturated when the late slope is small.
  late_mean,
  /// Least-squares line through the late window, which tolerates a slow
  /// residual drift.
  late_trend,
};

struct BreakTimeOptions {
  int late_first = 40;
  int late_last = 70;
  SaturationReference reference = SaturationReference::late_trend;
  /// Largest late slope (points per kick) still counted as saturated.
  double max_late_slope = 0.5;
};

struct BreakTime {
  std::optional<int> kick;  ///< empty when the curve does not saturate
  double late_slope = 0.0;
  double late_level = 0.0;  ///< reference value at late_first
};

/// Smallest kick N such that the curve stays within tolerance_points of the
/// saturation reference for every sample from N through the end of the
/// late window. Curves ending before late_first use their final third as
/// the late window.
BreakTime break_time(const DiffusionCurve& curve, double tolerance_points,
                     const BreakTimeOptions& options = {});

/// Convolution with a box of half-width `resolution`: each bin's mass is
/// spread uniformly over [c - r, c + r] with exact overlap weights. Mass
/// beyond the grid is kept in the end bins.
MomentumDistribution detector_blur(const MomentumDistribution& dist, double resolution);

}  // namespace cantori
