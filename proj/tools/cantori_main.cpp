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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cantori/config.hpp"
#include "cantori/experiment.hpp"
#include "cantori/quantum.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = 0;
};

void apply_globals(cantori::RawConfig& raw, const Globals& g) {
  if (g.seed) raw.set("seed", std::to_string(*g.seed));
  if (g.out) raw.set("output", *g.out);
}

void print_summary(const cantori::ExperimentResult& r) {
  for (const auto& c : r.curves) {
    std::cout << c.label << ": " << cantori::format_number(c.percent.back()) << " % +- "
              << cantori::format_number(c.percent_stderr.back()) << " after " << c.percent.size() - 1
              << " kicks, break time ";
    if (c.break_time) std::cout << *c.break_time;
    else std::cout << "none";
    std::cout << "\n";
  }
  for (const auto& f : r.fluxes)
    std::cout << "k = " << cantori::format_number(f.k) << ": flux "
              << cantori::format_number(f.flux_in_kbar) << " +- "
              << cantori::format_number(f.statistical_error) << " kbar\n";
  if (r.flux_loglog_slope)
    std::cout << "log-log slope: " << cantori::format_number(*r.flux_loglog_slope) << "\n";
  for (const auto& s : r.sections)
    std::cout << s.label << ": " << s.crossing_inner << " of " << s.orbits
              << " orbits reach rho_c, " << s.crossing_outer << " reach rho_outer\n";
  for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
}

int run_config(cantori::RawConfig raw, const std::vector<std::string>& overrides, const Globals& g) {
  for (const auto& o : overrides) raw.apply_override(o);
  apply_globals(raw, g);
  const cantori::ExperimentConfig cfg = cantori::resolve_experiment(raw);
  cantori::RunOptions options;
  options.threads = g.threads;
  options.log = &std::cerr;
  print_summary(cantori::run_experiment(cfg, options));
  return 0;
}

int convert_lab(const std::string& path, const Globals& g) {
  const cantori::LabConfig lab = cantori::resolve_lab(cantori::RawConfig::load(path));
  const cantori::LabConversion conv = cantori::dimensionless_from_lab(lab.lab);
  const double k_mean = cantori::mean_kick_from_peak(conv.params.kick_strength);
  std::cout << "k = " << cantori::format_number(conv.params.kick_strength) << "\n"
            << "k_mean = " << cantori::format_number(k_mean) << "\n"
            << "kbar = " << cantori::format_number(conv.params.kbar) << "\n"
            << "eta = " << cantori::format_number(lab.eta) << "\n"
            << "train = " << conv.train.describe() << "\n";
  if (g.out) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [key, value] : lab.echo) config[key] = value;
    j["version"] = cantori::version_string();
    j["config"] = config;
    j["k"] = conv.params.kick_strength;
    j["k_mean"] = k_mean;
    j["kbar"] = conv.params.kbar;
    j["eta"] = lab.eta;
    j["pulse_width"] = conv.train.pulse_width();
    j["leading_edges"] = std::vector<double>(conv.train.leading_edges().begin(),
                                             conv.train.leading_edges().end());
    const std::string file = *g.out + ".json";
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + file + "'");
    f << j.dump(2) << "\n";
    std::cout << "wrote " << file << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-pulse kicked-atom simulator: classical and quantum diffusion through cantori"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", cantori::version_string());

  Globals g;
  std::uint64_t seed = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
  auto* out_opt = app.add_option("--out", out, "output path prefix (overrides the config)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--set", overrides, "override key=value");

  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "run a figure preset (fig2..fig9)");
  figure->add_option("id", figure_id, "figure id")->required();
  figure->add_option("--set", overrides, "override key=value");

  std::string lab_path;
  auto* lab = app.add_subcommand("convert-lab", "convert lab parameters to dimensionless form");
  lab->add_option("config", lab_path, "config file with a [lab] section")->required();

  double flux_k = 0.0;
  std::size_t samples = 100000;
  std::string flux_train = "double";
  auto* flux = app.add_subcommand("flux", "turnstile flux through the rho = 10 pi cantorus");
  flux->add_option("--k", flux_k, "kick strength")->required();
  flux->add_option("--samples", samples, "samples along the cantorus");
  flux->add_option("--train", flux_train, "double | single");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (*seed_opt) g.seed = seed;
  if (*out_opt) g.out = out;

  try {
    if (*run) return run_config(cantori::RawConfig::load(config_path), overrides, g);
    if (*figure) return run_config(cantori::RawConfig::parse(cantori::figure_preset(figure_id), figure_id),
                                   overrides, g);
    if (*lab) return convert_lab(lab_path, g);
    if (*flux) {
      cantori::RawConfig raw;
      raw.set("engine", "flux");
      raw.set("seed", "0");
      raw.set("train", flux_train);
      raw.set("k", cantori::format_number(flux_k));
      raw.set("flux.samples", std::to_string(samples));
      raw.set("output", "flux");
      apply_globals(raw, g);
      const cantori::ExperimentConfig cfg = cantori::resolve_experiment(raw);
      if (g.out) {
        cantori::RunOptions options;
        options.threads = g.threads;
        print_summary(cantori::run_experiment(cfg, options));
      } else {
        const auto& r = cfg.runs.front();
        const cantori::FluxEstimate f = cantori::cantorus_flux(
            r.k, r.train, cfg.rho_c, cfg.flux.samples, cfg.kbar, cfg.flux.integrator, g.threads);
        std::cout << "k = " << cantori::format_number(f.k) << "\n"
                  << "flux = " << cantori::format_number(f.flux_in_kbar) << " kbar\n"
                  << "stderr = " << cantori::format_number(f.statistical_error) << " kbar\n"
                  << "net = " << cantori::format_number(f.net_flux_in_kbar) << " kbar\n";
      }
      return 0;
    }
  } catch (const cantori::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cantori::TruncationError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
