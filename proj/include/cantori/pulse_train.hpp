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

#include <span>
#include <string>
#include <vector>

namespace cantori {

/// Periodic rectangular envelope f(t) on the unit period.
///
/// Every sub-pulse has the same width and starts at one of the leading
/// edges. Sub-pulses lie inside [0, 1) and never overlap. Times are in units
/// of the kick period.
class PulseTrain {
 public:
  PulseTrain(double pulse_width, std::vector<double> leading_edges);

  /// Two pulses of width 1/20 whose leading edges are 1/10 apart.
  static PulseTrain double_pulse();
  /// One pulse of width 1/10; same total area as double_pulse().
  static PulseTrain single_pulse();

  double pulse_width() const { return width_; }
  std::span<const double> leading_edges() const { return edges_; }
  std::size_t pulse_count() const { return edges_.size(); }
  double total_area() const { return width_ * static_cast<double>(edges_.size()); }

  /// Time origin for the Fourier expansion: the midpoint between the first
  /// leading edge and the end of the last sub-pulse.
  double reference_time() const;

  std::string describe() const;

  friend bool operator==(const PulseTrain&, const PulseTrain&) = default;

 private:
  double width_;
  std::vector<double> edges_;
};

/// 1 if t (reduced modulo 1) lies in [edge, edge + width) for some sub-pulse.
int pulse_envelope(double t, const PulseTrain& train);

/// Cosine coefficient a_r of f(t) = sum_r a_r cos(2 pi r (t - t_ref)), with
/// t_ref = train.reference_time():
///
///   a_0 = n w
///   a_r = sum_j [sin(2 pi r (e_j + w - t_ref)) - sin(2 pi r (e_j - t_ref))] / (2 pi r)
///
/// For trains symmetric about t_ref this is the full coefficient of the
/// cos(phi - 2 pi r t) expansion of cos(phi) f(t).
double fourier_coefficient(int r, const PulseTrain& train);

/// Sine counterpart b_r; identically zero for symmetric trains.
double fourier_sine_coefficient(int r, const PulseTrain& train);

/// |c_r| = sqrt(a_r^2 + b_r^2). Independent of the time origin.
double fourier_magnitude(int r, const PulseTrain& train);

/// Momenta rho = 2 pi r (1 <= r < r_max) where the resonance amplitude
/// vanishes (|c_r| < 1e-12). These are the unbroken KAM boundaries.
std::vector<double> kam_boundaries(const PulseTrain& train, int r_max);

}  // namespace cantori
