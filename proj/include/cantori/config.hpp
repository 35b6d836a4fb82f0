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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cantori/classical.hpp"
#include "cantori/lab_units.hpp"
#include "cantori/pulse_train.hpp"

namespace cantori {

/// Invalid configuration. key() names the offending entry when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat key = value text. Lines are `key = value`, `[section]` headers
/// qualify the keys that follow as `section.key`, and `#` starts a comment.
class RawConfig {
 public:
  static RawConfig parse(const std::string& text, const std::string& source = "config");
  static RawConfig load(const std::string& path);

  /// Sets or replaces `key` from a `key=value` override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::optional<std::string> get(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parses a number, optionally written as a multiple of pi ("10pi", "pi").
double parse_real(const std::string& key, const std::string& text);
std::vector<double> parse_real_list(const std::string& key, const std::string& text);

enum class EngineKind { classical, quantum, flux, poincare, compare };

std::string to_string(EngineKind e);

/// One curve or section: a (train, k, eta) combination.
struct RunSpec {
  std::string train_name;
  PulseTrain train = PulseTrain::double_pulse();
  double k = 0.0;
  double eta = 0.0;
};

struct ExperimentConfig {
  EngineKind engine = EngineKind::compare;
  std::uint64_t seed = 0;
  std::vector<RunSpec> runs;
  double kbar = 2.6;
  int kicks = 70;
  double rho_c = 0.0;
  double rho_outer = 0.0;
  double sigma = 9.2;
  std::string output;
  char delimiter = ',';

  struct Classical {
    std::size_t particles = 100000;
    ClassicalIntegrator integrator{};
    double kick_spread = 0.0;
  } classical;

  struct Quantum {
    std::size_t members = 256;
    int n_max = 256;
    int substeps = 50;
    double kick_spread = 0.0;
  } quantum;

  struct Lineshape {
    std::vector<int> kicks;  ///< snapshot kicks; empty means the final kick
    double blur = 0.0;
    double bin_width = 0.5;
  } lineshape;

  struct Flux {
    std::size_t samples = 100000;
    ClassicalIntegrator integrator{};
  } flux;

  struct Poincare {
    std::size_t phi_points = 40;
    std::size_t rho_points = 40;
    double rho_span = 0.0;
    int periods = 2000;
    int stride = 10;
    ClassicalIntegrator integrator{};
  } poincare;

  struct Analysis {
    double break_tolerance = 4.0;
    int late_first = 40;
    int late_last = 70;
  } analysis;

  /// Every recognised key with its resolved value, in canonical order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Validates keys and values and fills defaults. Throws ConfigError naming
/// the first offending key.
ExperimentConfig resolve_experiment(const RawConfig& raw);

/// Keys of the [lab] block read by convert-lab.
struct LabConfig {
  LabParameters lab;
  double eta = 0.0;
  std::vector<std::pair<std::string, std::string>> echo;
};

LabConfig resolve_lab(const RawConfig& raw);

/// Config text for a figure preset ("fig2" .. "fig9").
std::string figure_preset(const std::string& figure_id);
std::vector<std::string> figure_ids();

}  // namespace cantori
