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

#include "cantori/pulse_train.hpp"

namespace cantori {

/// Scaled parameters of the kicked system.
struct DimensionlessParams {
  double kick_strength = 0.0;  ///< k
  double kbar = 2.6;           ///< effective Planck constant, [phi, rho] = i kbar
  double eta = 0.0;            ///< spontaneous-emission probability per kick cycle
  int num_kicks = 1;

  void validate() const;
};

/// Dipole line strengths for Cs F=4 -> F'=5,4,3 with equal Zeeman populations.
inline constexpr double kLineStrength45 = 11.0 / 27.0;
inline constexpr double kLineStrength44 = 7.0 / 36.0;
inline constexpr double kLineStrength43 = 7.0 / 108.0;

/// Cs 6P3/2 hyperfine splittings (Hz).
inline constexpr double kCsSplitting54Hz = 251.0e6;
inline constexpr double kCsSplitting43Hz = 201.3e6;

/// Cs D2 recoil frequency omega_R / 2 pi (Hz) at 852 nm.
inline constexpr double kCsRecoilHz = 2.0663e3;

/// Laboratory description of the pulsed standing wave. Angular frequencies
/// in rad/s, times in seconds.
struct LabParameters {
  double rabi_frequency = 0.0;  ///< Omega; Omega/2 is the single-beam Rabi frequency
  double detuning_45 = 0.0;
  double detuning_44 = 0.0;
  double detuning_43 = 0.0;
  double line_strength_45 = kLineStrength45;
  double line_strength_44 = kLineStrength44;
  double line_strength_43 = kLineStrength43;
  double kick_period = 0.0;
  double pulse_width = 0.0;
  double pulse_separation = 0.0;
  double recoil_frequency = 0.0;
  double kick_strength_rms_spread = 0.06;

  /// Cs defaults: detunings from delta_45 via the excited-state splittings,
  /// recoil frequency at 852 nm.
  static LabParameters cesium(double rabi_frequency, double detuning_45_hz, double kick_period,
                              double pulse_width, double pulse_separation);

  void validate() const;

  /// Omega^2 (s45/d45 + s44/d44 + s43/d43).
  double effective_rabi_frequency() const;
};

struct LabConversion {
  DimensionlessParams params;
  PulseTrain train;
};

/// k = Omega_eff omega_R T^2, kbar = 8 omega_R T, train width tau_p/T with
/// edges {0, tau_s/T} (a single edge when tau_s is zero). eta is left at 0;
/// it is an input, not derived here.
LabConversion dimensionless_from_lab(const LabParameters& lab);

/// Momentum in ladder units: n = rho / kbar.
inline double ladder_index_from_rho(double rho, double kbar) { return rho / kbar; }

/// Beam-averaged kick strength from the on-axis value.
inline double mean_kick_from_peak(double k_max) { return 0.94 * k_max; }

}  // namespace cantori
