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

#include "cantori/pulse_train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cantori {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr double kZeroAmplitude = 1e-12;

}  // namespace

PulseTrain::PulseTrain(double pulse_width, std::vector<double> leading_edges)
    : width_(pulse_width), edges_(std::move(leading_edges)) {
  if (!(width_ > 0.0 && width_ < 1.0))
    throw std::invalid_argument("pulse width must lie in (0, 1)");
  if (edges_.empty())
    throw std::invalid_argument("pulse train needs at least one leading edge");
  std::sort(edges_.begin(), edges_.end());
  for (double e : edges_) {
    if (!(e >= 0.0 && e < 1.0))
      throw std::invalid_argument("leading edges must lie in [0, 1)");
  }
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (edges_[i] + width_ > edges_[i + 1] + kEdgeSlack)
      throw std::invalid_argument("sub-pulses overlap");
  }
  if (edges_.back() + width_ > 1.0 + kEdgeSlack)
    throw std::invalid_argument("last sub-pulse does not fit in the period");
}

PulseTrain PulseTrain::double_pulse() { return PulseTrain(1.0 / 20.0, {0.0, 1.0 / 10.0}); }

PulseTrain PulseTrain::single_pulse() { return PulseTrain(1.0 / 10.0, {0.0}); }

double PulseTrain::reference_time() const {
  return 0.5 * (edges_.front() + edges_.back() + width_);
}

std::string PulseTrain::describe() const {
  std::ostringstream os;
  os.precision(9);
  os << "width=" << width_ << " edges=";
  for (std::size_t i = 0; i < edges_.size(); ++i) os << (i ? ";" : "") << edges_[i];
  return os.str();
}

int pulse_envelope(double t, const PulseTrain& train) {
  double u = t - std::floor(t);
  if (u >= 1.0) u = 0.0;
  for (double e : train.leading_edges()) {
    if (u >= e && u < e + train.pulse_width()) return 1;
  }
  return 0;
}

double fourier_coefficient(int r, const PulseTrain& train) {
  if (r == 0) return train.total_area();
  const double omega = 2.0 * std::numbers::pi * r;
  const double t_ref = train.reference_time();
  double sum = 0.0;
  for (double e : train.leading_edges()) {
    sum += std::sin(omega * (e + train.pulse_width() - t_ref)) - std::sin(omega * (e - t_ref));
  }
  return sum / omega;
}

double fourier_sine_coefficient(int r, const PulseTrain& train) {
  if (r == 0) return 0.0;
  const double omega = 2.0 * std::numbers::pi * r;
  const double t_ref = train.reference_time();
  double sum = 0.0;
  for (double e : train.leading_edges()) {
    sum += std::cos(omega * (e - t_ref)) - std::cos(omega * (e + train.pulse_width() - t_ref));
  }
  return sum / omega;
}

double fourier_magnitude(int r, const PulseTrain& train) {
  return std::hypot(fourier_coefficient(r, train), fourier_sine_coefficient(r, train));
}

std::vector<double> kam_boundaries(const PulseTrain& train, int r_max) {
  if (r_max < 1) throw std::invalid_argument("r_max must be at least 1");
  std::vector<double> out;
  for (int r = 1; r < r_max; ++r) {
    if (fourier_magnitude(r, train) < kZeroAmplitude) out.push_back(2.0 * std::numbers::pi * r);
  }
  return out;
}

}  // namespace cantori
