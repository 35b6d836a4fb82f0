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

#include "cantori/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cantori/parallel.hpp"
#include "cantori/quantum.hpp"
#include "cantori/rng.hpp"

namespace cantori {

void CrosscheckParams::validate() const {
  if (n_max < 1 || 2 * n_max + 1 > 32) throw std::invalid_argument("crosscheck ladder must have 3..31 sites");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (num_kicks < 1) throw std::invalid_argument("num_kicks must be >= 1");
  if (beta_sectors < 2) throw std::invalid_argument("beta_sectors must be >= 2");
  if (mc_samples == 0) throw std::invalid_argument("mc_samples must be >= 1");
  if (!(score_floor >= 0.0)) throw std::invalid_argument("score_floor must be >= 0");
  if (members.empty()) throw std::invalid_argument("crosscheck needs at least one member");
  for (const auto& m : members) {
    if (m.sector < 1 || m.sector >= beta_sectors)
      throw std::invalid_argument("initial sectors must lie in [1, beta_sectors)");
    if (std::abs(m.n0) > n_max) throw std::invalid_argument("initial site outside the ladder");
  }
}

namespace {

using Matrix = std::vector<complex>;  // row-major, sites ordered n = -n_max..n_max

struct Ladder {
  int n_max;
  int size;
  int slot(int n) const { return n + n_max; }
};

Matrix multiply(const Matrix& a, const Matrix& b, int s) {
  Matrix c(static_cast<std::size_t>(s * s));
  for (int i = 0; i < s; ++i)
    for (int l = 0; l < s; ++l) {
      const complex x = a[static_cast<std::size_t>(i * s + l)];
      if (x == complex{}) continue;
      for (int j = 0; j < s; ++j) c[static_cast<std::size_t>(i * s + j)] += x * b[static_cast<std::size_t>(l * s + j)];
    }
  return c;
}

Matrix adjoint(const Matrix& a, int s) {
  Matrix c(a.size());
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) c[static_cast<std::size_t>(j * s + i)] = std::conj(a[static_cast<std::size_t>(i * s + j)]);
  return c;
}

// T rho T^dagger for a cyclic shift of `carry` sites.
void add_shifted(Matrix& target, const Matrix& rho, int carry, double weight, int s) {
  int c = carry % s;
  if (c < 0) c += s;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      target[static_cast<std::size_t>(((i + c) % s) * s + (j + c) % s)] += weight * rho[static_cast<std::size_t>(i * s + j)];
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::vector<double> exact_distribution(const CrosscheckParams& p, const Ladder& ladder) {
  const int s = ladder.size;
  const int q = p.beta_sectors;
  LadderPropagator prop(p.train, p.k, p.kbar, p.n_max, p.substeps_per_pulse);

  std::map<int, Matrix> unitaries;
  auto unitary = [&](int sector) -> const Matrix& {
    auto it = unitaries.find(sector);
    if (it != unitaries.end()) return it->second;
    Matrix u(static_cast<std::size_t>(s * s));
    const double beta = static_cast<double>(sector) / q;
    for (int col = -p.n_max; col <= p.n_max; ++col) {
      LadderState st = LadderState::basis(p.n_max, beta, p.kbar, col);
      prop.evolve_period(st);
      for (int row = -p.n_max; row <= p.n_max; ++row)
        u[static_cast<std::size_t>(ladder.slot(row) * s + ladder.slot(col))] = st.amplitude(row);
    }
    return unitaries.emplace(sector, std::move(u)).first->second;
  };

  std::vector<Matrix> rho(static_cast<std::size_t>(q));
  const double w0 = 1.0 / static_cast<double>(p.members.size());
  for (const auto& m : p.members) {
    auto& r = rho[static_cast<std::size_t>(m.sector)];
    if (r.empty()) r.assign(static_cast<std::size_t>(s * s), complex{});
    const int i = ladder.slot(m.n0);
    r[static_cast<std::size_t>(i * s + i)] += w0;
  }

  // Composite Simpson weights for integral_{-1}^{1} du / 2 on the nodes u = m / q.
  std::vector<double> node_weight(static_cast<std::size_t>(2 * q + 1));
  for (int m = -q; m <= q; ++m) {
    const double c = (std::abs(m) == q) ? 1.0 : ((m + q) % 2 == 1 ? 4.0 : 2.0);
    node_weight[static_cast<std::size_t>(m + q)] = c / (6.0 * q);
  }
  for (int kick = 0; kick < p.num_kicks; ++kick) {
    std::vector<Matrix> next(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
      const Matrix& r = rho[static_cast<std::size_t>(j)];
      if (r.empty()) continue;
      const Matrix& u = unitary(j);
      const Matrix evolved = multiply(multiply(u, r, s), adjoint(u, s), s);
      auto add = [&](int sector, int carry, double weight) {
        auto& t = next[static_cast<std::size_t>(sector)];
        if (t.empty()) t.assign(static_cast<std::size_t>(s * s), complex{});
        add_shifted(t, evolved, carry, weight, s);
      };
      if (p.eta < 1.0) add(j, 0, 1.0 - p.eta);
      if (p.eta > 0.0) {
        for (int m = -q; m <= q; ++m) {
          const double w = node_weight[static_cast<std::size_t>(m + q)];
          const int carry = floor_div(j + m, q);
          add(j + m - carry * q, carry, p.eta * w);
        }
      }
    }
    rho = std::move(next);
  }

  // Bins n = -n_max - 1 .. n_max.
  std::vector<double> bins(static_cast<std::size_t>(s + 1), 0.0);
  for (int j = 0; j < q; ++j) {
    const Matrix& r = rho[static_cast<std::size_t>(j)];
    if (r.empty()) continue;
    for (int n = -p.n_max; n <= p.n_max; ++n) {
      const double pop = r[static_cast<std::size_t>(ladder.slot(n) * s + ladder.slot(n))].real();
      const auto bin = static_cast<std::size_t>(n + p.n_max + 1);
      if (j == 0) {
        bins[bin] += 0.5 * pop;
        bins[bin - 1] += 0.5 * pop;
      } else {
        bins[bin] += pop;
      }
    }
  }
  return bins;
}

struct McPartial {
  // Per member, per bin: sum x and sum x^2; plus sample counts per member.
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::vector<double> count;
};

}  // namespace

CrosscheckReport density_matrix_crosscheck(const CrosscheckParams& p) {
  p.validate();
  const Ladder ladder{p.n_max, 2 * p.n_max + 1};
  const std::size_t nbins = static_cast<std::size_t>(ladder.size + 1);
  const std::size_t members = p.members.size();

  CrosscheckReport report;
  for (int n = -p.n_max - 1; n <= p.n_max; ++n) report.sites.push_back(n);
  report.exact = exact_distribution(p, ladder);

  constexpr std::size_t kSamplesPerBlock = 512;
  const std::size_t blocks = (p.mc_samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  McPartial total{std::vector<double>(members * nbins, 0.0), std::vector<double>(members * nbins, 0.0),
                  std::vector<double>(members, 0.0)};
  for_each_block_ordered(
      blocks, p.threads,
      [&](std::size_t b) {
        McPartial part{std::vector<double>(members * nbins, 0.0),
                       std::vector<double>(members * nbins, 0.0), std::vector<double>(members, 0.0)};
        LadderPropagator prop(p.train, p.k, p.kbar, p.n_max, p.substeps_per_pulse);
        const std::size_t end = std::min(p.mc_samples, (b + 1) * kSamplesPerBlock);
        for (std::size_t sample = b * kSamplesPerBlock; sample < end; ++sample) {
          const std::size_t m = sample % members;
          const auto& init = p.members[m];
          LadderState st = LadderState::basis(
              p.n_max, static_cast<double>(init.sector) / p.beta_sectors, p.kbar, init.n0);
          RandomStream rng(p.seed, sample);
          for (int kick = 0; kick < p.num_kicks; ++kick) {
            prop.evolve_period(st);
            if (p.eta > 0.0 && rng.bernoulli(p.eta)) {
              // Same shift as apply_momentum_kick, minus the edge guard: the
              // exact side wraps cyclically too.
              const double shifted = st.beta() + rng.uniform(-1.0, 1.0);
              const double carry = std::floor(shifted);
              double beta = shifted - carry;
              if (beta >= 1.0) beta = 0.0;
              st.shift_sites(static_cast<int>(carry));
              st.set_beta(beta);
            }
          }
          part.count[m] += 1.0;
          for (int n = -p.n_max; n <= p.n_max; ++n) {
            const double x = st.population(n);
            const std::size_t idx = m * nbins + static_cast<std::size_t>(n + p.n_max + 1);
            part.sum[idx] += x;
            part.sum_sq[idx] += x * x;
          }
        }
        return part;
      },
      [&](McPartial&& part) {
        for (std::size_t i = 0; i < total.sum.size(); ++i) {
          total.sum[i] += part.sum[i];
          total.sum_sq[i] += part.sum_sq[i];
        }
        for (std::size_t m = 0; m < members; ++m) total.count[m] += part.count[m];
      });

  report.monte_carlo.assign(nbins, 0.0);
  report.monte_carlo_stderr.assign(nbins, 0.0);
  const double mw = 1.0 / static_cast<double>(members);
  for (std::size_t bin = 0; bin < nbins; ++bin) {
    double mean = 0.0;
    double var = 0.0;
    for (std::size_t m = 0; m < members; ++m) {
      const double c = total.count[m];
      if (c == 0.0) throw std::invalid_argument("mc_samples smaller than the member count");
      const double mu = total.sum[m * nbins + bin] / c;
      const double s2 = c > 1.0 ? std::max(0.0, (total.sum_sq[m * nbins + bin] - c * mu * mu) / (c - 1.0)) : 0.0;
      mean += mw * mu;
      var += mw * mw * s2 / c;
    }
    report.monte_carlo[bin] = mean;
    report.monte_carlo_stderr[bin] = std::sqrt(var);
  }

  for (std::size_t bin = 0; bin < nbins; ++bin) {
    const double diff = std::abs(report.exact[bin] - report.monte_carlo[bin]);
    report.max_discrepancy = std::max(report.max_discrepancy, diff);
    report.max_stderr = std::max(report.max_stderr, report.monte_carlo_stderr[bin]);
    if (report.monte_carlo_stderr[bin] > 0.0 && report.exact[bin] >= p.score_floor)
      report.max_standard_score = std::max(report.max_standard_score, diff / report.monte_carlo_stderr[bin]);
  }
  return report;
}

}  // namespace cantori
