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

#include <cstddef>
#include <span>
#include <vector>

namespace cantori {

inline constexpr double kDefaultBinWidth = 0.5;

/// Uniform momentum grid symmetric about rho = 0. Bin j (j in [-J, J]) is
/// centred on j * bin_width and covers [(j - 1/2) w, (j + 1/2) w).
class MomentumGrid {
 public:
  MomentumGrid(double bin_width, std::size_t half_bins);

  /// Smallest symmetric grid whose bins cover |rho| <= rho_max.
  static MomentumGrid covering(double rho_max, double bin_width = kDefaultBinWidth);

  double bin_width() const { return width_; }
  std::size_t half_bins() const { return half_; }
  std::size_t size() const { return 2 * half_ + 1; }
  double center(std::size_t i) const;
  double lower_edge(std::size_t i) const { return center(i) - 0.5 * width_; }
  double upper_edge(std::size_t i) const { return center(i) + 0.5 * width_; }
  double max_abs_rho() const { return (static_cast<double>(half_) + 0.5) * width_; }

  /// Nearest bin; momenta beyond the grid land in the outermost bins.
  std::size_t bin_of(double rho) const;
  bool contains(double rho) const;

  friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

 private:
  double width_;
  std::size_t half_;
};

/// Binned probability over a MomentumGrid.
class MomentumDistribution {
 public:
  explicit MomentumDistribution(MomentumGrid grid);
  MomentumDistribution(MomentumGrid grid, std::vector<double> probabilities);

  const MomentumGrid& grid() const { return grid_; }
  std::span<const double> probabilities() const { return p_; }
  std::span<double> probabilities() { return p_; }
  double bin_width() const { return grid_.bin_width(); }
  std::size_t size() const { return p_.size(); }
  double center(std::size_t i) const { return grid_.center(i); }

  /// Probability density (per unit rho) in bin i.
  double density(std::size_t i) const { return p_[i] / grid_.bin_width(); }

  void deposit(double rho, double weight) { p_[grid_.bin_of(rho)] += weight; }
  double total() const;
  void normalize();
  /// Mirror image rho -> -rho.
  MomentumDistribution mirrored() const;

  /// Mass in the closed |rho| window [lo, hi], splitting boundary bins linearly.
  double mass_in_abs_window(double lo, double hi) const;

  MomentumDistribution& operator+=(const MomentumDistribution& other);
  MomentumDistribution& operator*=(double s);

 private:
  MomentumGrid grid_;
  std::vector<double> p_;
};

/// Sampled density on the grid from a function of rho (bin centres), normalized.
template <class F>
MomentumDistribution distribution_from_density(const MomentumGrid& grid, F&& density) {
  MomentumDistribution d(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) d.probabilities()[i] = density(grid.center(i));
  d.normalize();
  return d;
}

}  // namespace cantori
