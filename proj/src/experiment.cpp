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

#include "cantori/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cantori/observables.hpp"
#include "cantori/quantum.hpp"

#ifndef CANTORI_VERSION
#define CANTORI_VERSION "0.0.0"
#endif

namespace cantori {

std::string version_string() { return CANTORI_VERSION; }

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double loglog_slope(const std::vector<FluxEstimate>& fluxes) {
  std::vector<double> x, y;
  for (const auto& f : fluxes) {
    if (f.k > 0.0 && f.flux > 0.0) {
      x.push_back(std::log(f.k));
      y.push_back(std::log(f.flux));
    }
  }
  if (x.size() < 2) throw std::invalid_argument("slope needs two positive flux values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope needs two distinct k values");
  return sxy / sxx;
}

namespace {

using json = nlohmann::ordered_json;

class Table {
 public:
  Table(const std::string& path, const ExperimentConfig& cfg) : out_(path, std::ios::binary), sep_(cfg.delimiter) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    out_ << "# cantori " << version_string() << "\n";
    for (const auto& [key, value] : cfg.echo) out_ << "# " << key << " = " << value << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << sep_;
      out_ << cells[i];
    }
    out_ << "\n";
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream out_;
  char sep_;
};

std::string curve_label(const std::string& engine, const RunSpec& run) {
  return engine + "_" + run.train_name + "_k" + format_number(run.k) + "_eta" + format_number(run.eta);
}

void log_line(const RunOptions& options, const std::string& line) {
  if (options.log) *options.log << line << std::endl;
}

struct Snapshot {
  std::string label;
  MomentumDistribution dist;
};

void finish_curve(CurveSummary& c, const ExperimentConfig& cfg) {
  DiffusionCurve curve = DiffusionCurve::from_series(c.percent, c.k, c.eta,
                                                     c.engine == "classical" ? Engine::classical
                                                                             : Engine::quantum);
  BreakTimeOptions bt;
  bt.late_first = cfg.analysis.late_first;
  bt.late_last = cfg.analysis.late_last;
  const BreakTime b = break_time(curve, cfg.analysis.break_tolerance, bt);
  c.break_time = b.kick;
  c.late_slope = b.late_slope;
}

void diffusion(const ExperimentConfig& cfg, const RunOptions& options, const std::string& ext,
               ExperimentResult& result) {
  const MomentumGrid grid =
      MomentumGrid::covering(cfg.kbar * (cfg.quantum.n_max + 1), cfg.lineshape.bin_width);
  std::vector<int> snap_kicks = cfg.lineshape.kicks;
  if (snap_kicks.empty()) snap_kicks.push_back(cfg.kicks);
  std::vector<Snapshot> snapshots;
  const bool want_classical = cfg.engine == EngineKind::classical || cfg.engine == EngineKind::compare;
  const bool want_quantum = cfg.engine == EngineKind::quantum || cfg.engine == EngineKind::compare;

  for (const RunSpec& run : cfg.runs) {
    if (want_classical) {
      const std::string label = curve_label("classical", run);
      log_line(options, "running " + label);
      const ClassicalEnsemble ens = init_thermal_ensemble(cfg.sigma, cfg.classical.particles, cfg.seed);
      EnsembleOptions eo;
      eo.integrator = cfg.classical.integrator;
      eo.kick_rms_spread = cfg.classical.kick_spread;
      eo.threads = options.threads;
      const auto dists = evolve_ensemble(ens, run.k, run.train, cfg.kicks, grid, eo);
      CurveSummary c{label, "classical", run.train_name, run.k, run.eta, {}, {}, {}, 0.0};
      const double n = static_cast<double>(cfg.classical.particles);
      for (const auto& d : dists) {
        const double f = fraction_outside(d, cfg.rho_c);
        c.percent.push_back(f);
        c.percent_stderr.push_back(std::sqrt(std::max(0.0, f * (100.0 - f)) / n));
      }
      finish_curve(c, cfg);
      for (int s : snap_kicks)
        snapshots.push_back({label + "_N" + std::to_string(s),
                             detector_blur(dists[static_cast<std::size_t>(s)], cfg.lineshape.blur)});
      result.curves.push_back(std::move(c));
    }
    if (want_quantum) {
      const std::string label = curve_label("quantum", run);
      log_line(options, "running " + label);
      const ThermalMixture mix =
          init_quantum_mixture(cfg.sigma, cfg.kbar, cfg.quantum.members, cfg.quantum.n_max, cfg.seed);
      DimensionlessParams params{run.k, cfg.kbar, run.eta, cfg.kicks};
      QuantumOptions qo;
      qo.substeps_per_pulse = cfg.quantum.substeps;
      qo.threads = options.threads;
      qo.kick_rms_spread = cfg.quantum.kick_spread;
      qo.rho_c = cfg.rho_c;
      qo.bin_width = cfg.lineshape.bin_width;
      const QuantumRun q = simulate_quantum(params, run.train, mix, qo);
      if (q.max_norm_drift > 1e-8)
        throw TruncationError("unitarity guard: norm drift " + format_number(q.max_norm_drift));
      CurveSummary c{label, "quantum", run.train_name, run.k, run.eta,
                     q.fraction_outside, q.fraction_outside_stderr, {}, 0.0};
      finish_curve(c, cfg);
      for (int s : snap_kicks)
        snapshots.push_back({label + "_N" + std::to_string(s),
                             detector_blur(q.distributions[static_cast<std::size_t>(s)], cfg.lineshape.blur)});
      result.curves.push_back(std::move(c));
    }
  }

  const std::string data_path = cfg.output + ext;
  Table table(data_path, cfg);
  std::vector<std::string> header{"kick"};
  for (const auto& c : result.curves) {
    header.push_back(c.label + " [%]");
    header.push_back(c.label + "_stderr [%]");
  }
  table.row(header);
  for (int n = 0; n <= cfg.kicks; ++n) {
    std::vector<std::string> cells{std::to_string(n)};
    for (const auto& c : result.curves) {
      cells.push_back(format_number(c.percent[static_cast<std::size_t>(n)]));
      cells.push_back(format_number(c.percent_stderr[static_cast<std::size_t>(n)]));
    }
    table.row(cells);
  }
  table.close();
  result.files.push_back(data_path);

  const std::string shape_path = cfg.output + "_lineshape" + ext;
  Table shape(shape_path, cfg);
  std::vector<std::string> shape_header{"rho [1]"};
  for (const auto& s : snapshots) shape_header.push_back(s.label + " [1/rho]");
  shape.row(shape_header);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> cells{format_number(grid.center(i))};
    for (const auto& s : snapshots) cells.push_back(format_number(s.dist.density(i)));
    shape.row(cells);
  }
  shape.close();
  result.files.push_back(shape_path);
}

void flux(const ExperimentConfig& cfg, const RunOptions& options, const std::string& ext,
          ExperimentResult& result) {
  for (const RunSpec& run : cfg.runs) {
    log_line(options, "flux " + run.train_name + " k=" + format_number(run.k));
    result.fluxes.push_back(cantorus_flux(run.k, run.train, cfg.rho_c, cfg.flux.samples, cfg.kbar,
                                          cfg.flux.integrator, options.threads));
  }
  try {
    result.flux_loglog_slope = loglog_slope(result.fluxes);
  } catch (const std::invalid_argument&) {
  }
  const std::string path = cfg.output + ext;
  Table table(path, cfg);
  table.row({"train", "k [1]", "flux [kbar]", "flux_stderr [kbar]", "net_flux [kbar]", "samples [1]"});
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    const auto& f = result.fluxes[i];
    table.row({cfg.runs[i].train_name, format_number(f.k), format_number(f.flux_in_kbar),
               format_number(f.statistical_error), format_number(f.net_flux_in_kbar),
               std::to_string(f.sample_count)});
  }
  table.close();
  result.files.push_back(path);
}

void poincare(const ExperimentConfig& cfg, const RunOptions& options, const std::string& ext,
              ExperimentResult& result) {
  const auto grid = seed_grid(cfg.poincare.phi_points, cfg.poincare.rho_points, cfg.poincare.rho_span);
  const std::string path = cfg.output + ext;
  Table table(path, cfg);
  table.row({"run", "k [1]", "orbit", "phi [rad]", "rho [1]"});
  for (std::size_t r = 0; r < cfg.runs.size(); ++r) {
    const RunSpec& run = cfg.runs[r];
    const std::string label = "poincare_" + run.train_name + "_k" + format_number(run.k);
    log_line(options, "running " + label);
    const PoincareSection sec = poincare_section(grid, run.k, run.train, cfg.poincare.periods,
                                                 cfg.poincare.integrator, options.threads,
                                                 cfg.poincare.stride);
    result.sections.push_back({label, run.k, sec.orbits.size(), sec.orbits_crossing(cfg.rho_c),
                               sec.orbits_crossing(cfg.rho_outer)});
    const std::string run_id = std::to_string(r);
    const std::string k_text = format_number(run.k);
    for (const auto& p : sec.points)
      table.row({run_id, k_text, std::to_string(p.orbit), format_number(p.phi), format_number(p.rho)});
  }
  table.close();
  result.files.push_back(path);
}

json optional_number(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

void write_sidecar(const ExperimentConfig& cfg, const RunOptions& options, ExperimentResult& result) {
  json meta;
  meta["program"] = "cantori";
  meta["version"] = version_string();
  json config = json::object();
  for (const auto& [key, value] : cfg.echo) config[key] = value;
  meta["config"] = config;
  meta["threads"] = options.threads;
  meta["wall_time_s"] = result.wall_time_s;
  meta["files"] = result.files;
  json curves = json::array();
  for (const auto& c : result.curves) {
    curves.push_back({{"label", c.label},
                      {"engine", c.engine},
                      {"train", c.train},
                      {"k", c.k},
                      {"eta", c.eta},
                      {"final_percent", c.percent.back()},
                      {"final_stderr", c.percent_stderr.back()},
                      {"break_time", optional_number(c.break_time)},
                      {"late_slope", c.late_slope}});
  }
  if (!curves.empty()) meta["curves"] = curves;
  if (!result.fluxes.empty()) {
    json fl = json::array();
    for (const auto& f : result.fluxes)
      fl.push_back({{"k", f.k},
                    {"flux_kbar", f.flux_in_kbar},
                    {"stderr_kbar", f.statistical_error},
                    {"net_flux_kbar", f.net_flux_in_kbar},
                    {"samples", f.sample_count}});
    meta["flux"] = fl;
    meta["flux_loglog_slope"] = result.flux_loglog_slope ? json(*result.flux_loglog_slope) : json(nullptr);
  }
  if (!result.sections.empty()) {
    json secs = json::array();
    for (const auto& s : result.sections)
      secs.push_back({{"label", s.label},
                      {"k", s.k},
                      {"orbits", s.orbits},
                      {"crossing_rho_c", s.crossing_inner},
                      {"crossing_rho_outer", s.crossing_outer}});
    meta["poincare"] = secs;
  }
  const std::string path = cfg.output + ".json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << meta.dump(2) << "\n";
  result.files.push_back(path);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path parent = std::filesystem::path(cfg.output).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string ext = cfg.delimiter == ',' ? ".csv" : ".tsv";

  ExperimentResult result;
  switch (cfg.engine) {
    case EngineKind::classical:
    case EngineKind::quantum:
    case EngineKind::compare:
      diffusion(cfg, options, ext, result);
      break;
    case EngineKind::flux:
      flux(cfg, options, ext, result);
      break;
    case EngineKind::poincare:
      poincare(cfg, options, ext, result);
      break;
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_sidecar(cfg, options, result);
  return result;
}

}  // namespace cantori
