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

#include "cantori/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cantori {

double fraction_outside(const MomentumDistribution& dist, double rho_c) {
  if (!(rho_c > 0.0)) throw std::invalid_argument("rho_c must be > 0");
  return 100.0 * dist.mass_in_abs_window(rho_c, std::numeric_limits<double>::infinity());
}

double kinetic_energy(const MomentumDistribution& dist) {
  double e = 0.0;
  const auto p = dist.probabilities();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double c = dist.center(i);
    e += p[i] * c * c;
  }
  return 0.5 * e;
}

double window_density(const MomentumDistribution& dist, double lo, double hi) {
  if (!(hi > lo && lo >= 0.0)) throw std::invalid_argument("window needs 0 <= lo < hi");
  return dist.mass_in_abs_window(lo, hi) / (2.0 * (hi - lo));
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

}  // namespace

LocalizationFit fit_localization_length(const MomentumDistribution& dist, FitWindow window,
                                        double residual_threshold) {
  if (!(window.lo >= 0.0 && window.hi > window.lo))
    throw std::invalid_argument("fit window needs 0 <= lo < hi");
  const auto p = dist.probabilities();
  auto wing = [&](int sign) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double c = dist.center(i);
      if (sign * c <= 0.0 || p[i] <= 0.0) continue;
      const double a = std::abs(c);
      if (a < window.lo || a > window.hi) continue;
      x.push_back(a);
      y.push_back(std::log(p[i]));
    }
    if (x.size() < 3) throw std::invalid_argument("fit window holds fewer than 3 populated bins");
    return least_squares(x, y);
  };
  const LineFit pos = wing(+1);
  const LineFit neg = wing(-1);
  constexpr double kMinDecay = 1e-9;
  if (!(pos.slope < -kMinDecay && neg.slope < -kMinDecay))
    throw std::invalid_argument("wing does not decay over the fit window");

  LocalizationFit fit;
  fit.l_positive = -2.0 / pos.slope;
  fit.l_negative = -2.0 / neg.slope;
  fit.l_rho = 0.5 * (fit.l_positive + fit.l_negative);
  fit.rms_residual = std::max(pos.rms_residual, neg.rms_residual);
  fit.non_exponential = fit.rms_residual > residual_threshold;
  return fit;
}

std::string to_string(Engine e) { return e == Engine::classical ? "classical" : "quantum"; }

DiffusionCurve DiffusionCurve::from_series(std::vector<double> percent, double k, double eta,
                                           Engine engine) {
  DiffusionCurve c;
  c.kicks.resize(percent.size());
  for (std::size_t i = 0; i < percent.size(); ++i) c.kicks[i] = static_cast<int>(i);
  c.fraction_outside = std::move(percent);
  c.k = k;
  c.eta = eta;
  c.engine = engine;
  return c;
}

void DiffusionCurve::validate() const {
  if (kicks.size() != fraction_outside.size())
    throw std::invalid_argument("curve series lengths differ");
  if (kicks.empty()) throw std::invalid_argument("empty curve");
  for (std::size_t i = 0; i < kicks.size(); ++i) {
    if (i > 0 && kicks[i] <= kicks[i - 1]) throw std::invalid_argument("kick indices must increase");
    const double f = fraction_outside[i];
    if (!(f >= -1e-9 && f <= 100.0 + 1e-9)) throw std::invalid_argument("fraction outside [0, 100]");
  }
}

BreakTime break_time(const DiffusionCurve& curve, double tolerance_points,
                     const BreakTimeOptions& options) {
  curve.validate();
  if (!(tolerance_points >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (options.late_last < options.late_first) throw std::invalid_argument("empty late window");

  const std::size_t n = curve.kicks.size();
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (curve.kicks[i] < options.late_first || curve.kicks[i] > options.late_last) continue;
    first = std::min(first, i);
    last = i;
  }
  if (first == n || last - first < 2) {
    last = n - 1;
    first = n - std::max<std::size_t>(std::min<std::size_t>(3, n), n / 3);
  }

  std::vector<double> x, y;
  for (std::size_t i = first; i <= last; ++i) {
    x.push_back(curve.kicks[i]);
    y.push_back(curve.fraction_outside[i]);
  }
  const LineFit line = least_squares(x, y);

  BreakTime result;
  result.late_slope = line.slope;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  const bool trend = options.reference == SaturationReference::late_trend;
  auto reference = [&](double kick) { return trend ? line.intercept + line.slope * kick : mean; };
  result.late_level = reference(x.front());
  if (!(std::abs(line.slope) < options.max_late_slope)) return result;

  std::size_t start = last + 1;
  for (std::size_t i = last + 1; i-- > 0;) {
    if (std::abs(curve.fraction_outside[i] - reference(curve.kicks[i])) > tolerance_points) break;
    start = i;
  }
  if (start <= last) result.kick = curve.kicks[start];
  return result;
}

MomentumDistribution detector_blur(const MomentumDistribution& dist, double resolution) {
  if (!(resolution >= 0.0)) throw std::invalid_argument("resolution must be >= 0");
  if (resolution == 0.0) return dist;
  const MomentumGrid& grid = dist.grid();
  MomentumDistribution out(grid);
  const auto p = dist.probabilities();
  auto q = out.probabilities();
  const std::size_t last = grid.size() - 1;
  const double span = 2.0 * resolution;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    const double a = grid.center(i) - resolution;
    const double b = grid.center(i) + resolution;
    const double lo_edge = grid.lower_edge(0);
    const double hi_edge = grid.upper_edge(last);
    if (a < lo_edge) q[0] += p[i] * (std::min(b, lo_edge) - a) / span;
    if (b > hi_edge) q[last] += p[i] * (b - std::max(a, hi_edge)) / span;
    const std::size_t j0 = grid.bin_of(std::max(a, lo_edge));
    const std::size_t j1 = grid.bin_of(std::min(b, hi_edge));
    for (std::size_t j = j0 == 0 ? 0 : j0 - 1; j <= std::min(last, j1 + 1); ++j) {
      const double overlap = std::min(b, grid.upper_edge(j)) - std::max(a, grid.lower_edge(j));
      if (overlap > 0.0) q[j] += p[i] * overlap / span;
    }
  }
  return out;
}

}  // namespace cantori
