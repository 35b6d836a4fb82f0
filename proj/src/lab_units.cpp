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

#include "cantori/lab_units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cantori {

void DimensionlessParams::validate() const {
  if (!(kick_strength >= 0.0)) throw std::invalid_argument("kick strength k must be >= 0");
  if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (num_kicks < 1) throw std::invalid_argument("number of kicks must be positive");
}

LabParameters LabParameters::cesium(double rabi_frequency, double detuning_45_hz,
                                    double kick_period, double pulse_width,
                                    double pulse_separation) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  LabParameters lab;
  lab.rabi_frequency = rabi_frequency;
  lab.detuning_45 = two_pi * detuning_45_hz;
  lab.detuning_44 = two_pi * (detuning_45_hz + kCsSplitting54Hz);
  lab.detuning_43 = two_pi * (detuning_45_hz + kCsSplitting54Hz + kCsSplitting43Hz);
  lab.kick_period = kick_period;
  lab.pulse_width = pulse_width;
  lab.pulse_separation = pulse_separation;
  lab.recoil_frequency = two_pi * kCsRecoilHz;
  return lab;
}

void LabParameters::validate() const {
  if (!(kick_period > 0.0)) throw std::invalid_argument("kick period T must be > 0");
  if (!(recoil_frequency > 0.0)) throw std::invalid_argument("recoil frequency must be > 0");
  if (!(pulse_width > 0.0)) throw std::invalid_argument("pulse width must be > 0");
  if (!(pulse_separation >= 0.0)) throw std::invalid_argument("pulse separation must be >= 0");
  if (!(rabi_frequency >= 0.0)) throw std::invalid_argument("Rabi frequency must be >= 0");
  if (detuning_45 == 0.0 || detuning_44 == 0.0 || detuning_43 == 0.0)
    throw std::invalid_argument("detunings must be nonzero");
  if (pulse_separation > 0.0 && pulse_separation < pulse_width)
    throw std::invalid_argument("sub-pulses overlap (separation < width)");
  if (pulse_separation + pulse_width > kick_period)
    throw std::invalid_argument("both sub-pulses must fit in one kick period");
  if (!(kick_strength_rms_spread >= 0.0))
    throw std::invalid_argument("kick strength spread must be >= 0");
}

double LabParameters::effective_rabi_frequency() const {
  return rabi_frequency * rabi_frequency *
         (line_strength_45 / detuning_45 + line_strength_44 / detuning_44 +
          line_strength_43 / detuning_43);
}

LabConversion dimensionless_from_lab(const LabParameters& lab) {
  lab.validate();
  DimensionlessParams p;
  // Red detuning flips the sign of the potential, which is phi -> phi + pi.
  p.kick_strength = std::abs(lab.effective_rabi_frequency()) * lab.recoil_frequency *
                    lab.kick_period * lab.kick_period;
  p.kbar = 8.0 * lab.recoil_frequency * lab.kick_period;
  const double width = lab.pulse_width / lab.kick_period;
  std::vector<double> edges{0.0};
  if (lab.pulse_separation > 0.0) edges.push_back(lab.pulse_separation / lab.kick_period);
  return {p, PulseTrain(width, std::move(edges))};
}

}  // namespace cantori
