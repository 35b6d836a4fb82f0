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

#include "cantori/momentum_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cantori {

MomentumGrid::MomentumGrid(double bin_width, std::size_t half_bins)
    : width_(bin_width), half_(half_bins) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be > 0");
}

MomentumGrid MomentumGrid::covering(double rho_max, double bin_width) {
  if (!(rho_max >= 0.0)) throw std::invalid_argument("rho_max must be >= 0");
  const auto half = static_cast<std::size_t>(std::ceil(rho_max / bin_width - 0.5));
  return MomentumGrid(bin_width, half);
}

double MomentumGrid::center(std::size_t i) const {
  return (static_cast<double>(i) - static_cast<double>(half_)) * width_;
}

std::size_t MomentumGrid::bin_of(double rho) const {
  const double j = std::floor(rho / width_ + 0.5);
  const double h = static_cast<double>(half_);
  return static_cast<std::size_t>(std::clamp(j, -h, h) + h);
}

bool MomentumGrid::contains(double rho) const { return std::abs(rho) < max_abs_rho(); }

MomentumDistribution::MomentumDistribution(MomentumGrid grid)
    : grid_(grid), p_(grid.size(), 0.0) {}

MomentumDistribution::MomentumDistribution(MomentumGrid grid, std::vector<double> probabilities)
    : grid_(grid), p_(std::move(probabilities)) {
  if (p_.size() != grid_.size()) throw std::invalid_argument("probability vector does not match grid");
}

double MomentumDistribution::total() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

void MomentumDistribution::normalize() {
  const double t = total();
  if (!(t > 0.0)) throw std::domain_error("cannot normalize an empty distribution");
  for (double& x : p_) x /= t;
}

MomentumDistribution MomentumDistribution::mirrored() const {
  std::vector<double> q(p_.rbegin(), p_.rend());
  return MomentumDistribution(grid_, std::move(q));
}

double MomentumDistribution::mass_in_abs_window(double lo, double hi) const {
  double mass = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    const double a = grid_.lower_edge(i);
    const double b = grid_.upper_edge(i);
    // Overlap of [a, b) with [lo, hi] and with [-hi, -lo].
    const double pos = std::max(0.0, std::min(b, hi) - std::max(a, lo));
    const double neg = std::max(0.0, std::min(b, -lo) - std::max(a, -hi));
    mass += p_[i] * (pos + neg) / (b - a);
  }
  return mass;
}

MomentumDistribution& MomentumDistribution::operator+=(const MomentumDistribution& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("distribution grids differ");
  for (std::size_t i = 0; i < p_.size(); ++i) p_[i] += other.p_[i];
  return *this;
}

MomentumDistribution& MomentumDistribution::operator*=(double s) {
  for (double& x : p_) x *= s;
  return *this;
}

}  // namespace cantori
