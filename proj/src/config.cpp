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

#include "cantori/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace cantori {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

}  // namespace

RawConfig RawConfig::parse(const std::string& text, const std::string& source) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) throw ConfigError("", where + ": bad section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected key = value");
    const std::string name = trim(line.substr(0, eq));
    if (!valid_key(name)) throw ConfigError("", where + ": bad key '" + name + "'");
    const std::string key = section.empty() ? name : section + "." + name;
    if (cfg.get(key)) throw ConfigError(key, "duplicate key (" + where + ")");
    cfg.entries_.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

RawConfig RawConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void RawConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) throw ConfigError("", "bad override key '" + key + "'");
  set(key, trim(assignment.substr(eq + 1)));
}

void RawConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

std::optional<std::string> RawConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

double parse_real(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  double scale = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    t = trim(t.substr(0, t.size() - 2));
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
  }
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ConfigError(key, "'" + text + "' is not a number");
  return value * scale;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_real(key, item));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::classical: return "classical";
    case EngineKind::quantum: return "quantum";
    case EngineKind::flux: return "flux";
    case EngineKind::poincare: return "poincare";
    case EngineKind::compare: return "compare";
  }
  return "?";
}

namespace {

struct KeySpec {
  const char* key;
  const char* fallback;
  bool required = false;
};

const std::vector<KeySpec>& experiment_keys() {
  static const std::vector<KeySpec> keys = {
      {"engine", "compare"},
      {"seed", "", true},
      {"train", "double"},
      {"k", "310"},
      {"kbar", "2.6"},
      {"eta", "0"},
      {"kicks", "70"},
      {"rho_c", "10pi"},
      {"rho_outer", "30pi"},
      {"sigma", "9.2"},
      {"output", "cantori_run"},
      {"format", "csv"},
      {"train.width", "0.05"},
      {"train.edges", "0, 0.1"},
      {"classical.particles", "100000"},
      {"classical.substeps", "30"},
      {"classical.order", "sixth"},
      {"classical.kick_spread", "0"},
      {"quantum.members", "256"},
      {"quantum.n_max", "256"},
      {"quantum.substeps", "50"},
      {"quantum.kick_spread", "0"},
      {"lineshape.kicks", ""},
      {"lineshape.blur", "0"},
      {"lineshape.bin_width", "0.5"},
      {"flux.samples", "100000"},
      {"flux.substeps", "30"},
      {"poincare.phi_points", "40"},
      {"poincare.rho_points", "40"},
      {"poincare.rho_span", "10pi"},
      {"poincare.periods", "2000"},
      {"poincare.stride", "10"},
      {"poincare.substeps", "30"},
      {"analysis.break_tolerance", "4"},
      {"analysis.late_first", "40"},
      {"analysis.late_last", "70"},
  };
  return keys;
}

const std::vector<KeySpec>& lab_keys() {
  static const std::vector<KeySpec> keys = {
      {"lab.rabi_frequency", "", true},
      {"lab.detuning_hz", "", true},
      {"lab.kick_period", "25e-6"},
      {"lab.pulse_width", "1.25e-6"},
      {"lab.pulse_separation", "2.5e-6"},
      {"lab.recoil_hz", "2066.3"},
      {"lab.kick_spread", "0.06"},
      {"lab.eta", "0"},
  };
  return keys;
}

// Resolved values for a key table: raw entries over defaults.
class Resolved {
 public:
  Resolved(const RawConfig& raw, const std::vector<KeySpec>& specs) {
    for (const auto& [key, value] : raw.entries()) {
      const bool known = std::any_of(specs.begin(), specs.end(),
                                     [&](const KeySpec& s) { return key == s.key; });
      if (!known) throw ConfigError(key, "unknown key");
    }
    for (const auto& s : specs) {
      auto v = raw.get(s.key);
      if (!v && s.required) throw ConfigError(s.key, "required key is missing");
      values_[s.key] = v ? *v : s.fallback;
      echo_.emplace_back(s.key, values_[s.key]);
    }
  }

  const std::string& text(const std::string& key) const { return values_.at(key); }

  double real(const std::string& key, double lo, double hi, bool lo_open = false) const {
    const double v = parse_real(key, text(key));
    check_range(key, v, lo, hi, lo_open);
    return v;
  }

  long long integer(const std::string& key, long long lo, long long hi) const {
    const std::string t = trim(text(key));
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
      throw ConfigError(key, "'" + t + "' is not an integer");
    if (v < lo || v > hi)
      throw ConfigError(key, std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    return v;
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options) const {
    const std::string t = trim(text(key));
    std::string listing;
    for (const char* o : options) {
      if (t == o) return t;
      listing += listing.empty() ? o : std::string(" | ") + o;
    }
    throw ConfigError(key, "'" + t + "' is not one of " + listing);
  }

  static void check_range(const std::string& key, double v, double lo, double hi, bool lo_open) {
    const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
    if (!ok) {
      std::ostringstream msg;
      msg << v << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi << "]";
      throw ConfigError(key, msg.str());
    }
  }

  std::vector<std::pair<std::string, std::string>> echo() const { return echo_; }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, std::string>> echo_;
};

constexpr double kHuge = 1e300;

SplittingOrder parse_order(const Resolved& r, const std::string& key) {
  return r.choice(key, {"second", "sixth"}) == "second" ? SplittingOrder::second
                                                      : SplittingOrder::sixth;
}

}  // namespace

ExperimentConfig resolve_experiment(const RawConfig& raw) {
  const Resolved r(raw, experiment_keys());
  ExperimentConfig cfg;
  cfg.echo = r.echo();

  const std::string engine = r.choice("engine", {"classical", "quantum", "flux", "poincare", "compare"});
  if (engine == "classical") cfg.engine = EngineKind::classical;
  else if (engine == "quantum") cfg.engine = EngineKind::quantum;
  else if (engine == "flux") cfg.engine = EngineKind::flux;
  else if (engine == "poincare") cfg.engine = EngineKind::poincare;
  else cfg.engine = EngineKind::compare;

  {
    const std::string t = trim(r.text("seed"));
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
      throw ConfigError("seed", "'" + t + "' is not an unsigned integer");
    cfg.seed = seed;
  }

  cfg.kbar = r.real("kbar", 0.0, kHuge, true);
  cfg.kicks = static_cast<int>(r.integer("kicks", 1, 100000));
  cfg.rho_c = r.real("rho_c", 0.0, kHuge, true);
  cfg.rho_outer = r.real("rho_outer", cfg.rho_c, kHuge, true);
  cfg.sigma = r.real("sigma", 0.0, kHuge, true);
  cfg.output = trim(r.text("output"));
  if (cfg.output.empty()) throw ConfigError("output", "empty output path");
  cfg.delimiter = r.choice("format", {"csv", "tsv"}) == "csv" ? ',' : '\t';

  // Broadcast train, k and eta lists against each other.
  const std::vector<std::string> trains = split_list(r.text("train"));
  const std::vector<double> ks = parse_real_list("k", r.text("k"));
  const std::vector<double> etas = parse_real_list("eta", r.text("eta"));
  for (double k : ks) Resolved::check_range("k", k, 0.0, kHuge, false);
  for (double e : etas) Resolved::check_range("eta", e, 0.0, 1.0, false);
  std::size_t runs = 1;
  for (const auto& [key, len] : {std::pair<const char*, std::size_t>{"train", trains.size()},
                                 {"k", ks.size()}, {"eta", etas.size()}}) {
    if (len == 0) throw ConfigError(key, "empty list");
    if (len == 1) continue;
    if (runs != 1 && runs != len)
      throw ConfigError(key, "list of " + std::to_string(len) + " values does not broadcast against " +
                                 std::to_string(runs));
    runs = len;
  }
  std::optional<PulseTrain> custom;
  for (const auto& name : trains) {
    if (name != "double" && name != "single" && name != "custom")
      throw ConfigError("train", "'" + name + "' is not one of double | single | custom");
    if (name == "custom" && !custom) {
      const double width = r.real("train.width", 0.0, 1.0, true);
      const std::vector<double> edges = parse_real_list("train.edges", r.text("train.edges"));
      try {
        custom.emplace(width, edges);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("train.edges", e.what());
      }
    }
  }
  for (std::size_t i = 0; i < runs; ++i) {
    RunSpec spec;
    spec.train_name = trains[trains.size() == 1 ? 0 : i];
    spec.train = spec.train_name == "double"   ? PulseTrain::double_pulse()
                 : spec.train_name == "single" ? PulseTrain::single_pulse()
                                               : *custom;
    spec.k = ks[ks.size() == 1 ? 0 : i];
    spec.eta = etas[etas.size() == 1 ? 0 : i];
    cfg.runs.push_back(std::move(spec));
  }

  cfg.classical.particles = static_cast<std::size_t>(r.integer("classical.particles", 1, 100000000));
  cfg.classical.integrator.substeps_per_pulse = static_cast<int>(r.integer("classical.substeps", 1, 100000));
  cfg.classical.integrator.order = parse_order(r, "classical.order");
  cfg.classical.kick_spread = r.real("classical.kick_spread", 0.0, 1.0);

  cfg.quantum.members = static_cast<std::size_t>(r.integer("quantum.members", 1, 1000000));
  cfg.quantum.n_max = static_cast<int>(r.integer("quantum.n_max", 1, 1 << 20));
  cfg.quantum.substeps = static_cast<int>(r.integer("quantum.substeps", 1, 100000));
  cfg.quantum.kick_spread = r.real("quantum.kick_spread", 0.0, 1.0);
  const bool quantum = cfg.engine == EngineKind::quantum || cfg.engine == EngineKind::compare;
  if (quantum) {
    const double headroom = 30.0 * std::numbers::pi + 5.0 * cfg.sigma;
    if (!(cfg.kbar * cfg.quantum.n_max > headroom))
      throw ConfigError("quantum.n_max", "ladder too short: kbar * n_max must exceed 30 pi + 5 sigma = " +
                                             std::to_string(headroom));
  }

  if (!trim(r.text("lineshape.kicks")).empty()) {
    for (double v : parse_real_list("lineshape.kicks", r.text("lineshape.kicks"))) {
      if (v != std::floor(v) || v < 0 || v > cfg.kicks)
        throw ConfigError("lineshape.kicks", "snapshot kicks must be integers in [0, kicks]");
      cfg.lineshape.kicks.push_back(static_cast<int>(v));
    }
  }
  cfg.lineshape.blur = r.real("lineshape.blur", 0.0, kHuge);
  cfg.lineshape.bin_width = r.real("lineshape.bin_width", 0.0, kHuge, true);

  cfg.flux.samples = static_cast<std::size_t>(r.integer("flux.samples", 1000, 100000000));
  cfg.flux.integrator.substeps_per_pulse = static_cast<int>(r.integer("flux.substeps", 1, 100000));

  cfg.poincare.phi_points = static_cast<std::size_t>(r.integer("poincare.phi_points", 1, 100000));
  cfg.poincare.rho_points = static_cast<std::size_t>(r.integer("poincare.rho_points", 1, 100000));
  cfg.poincare.rho_span = r.real("poincare.rho_span", 0.0, kHuge, true);
  cfg.poincare.periods = static_cast<int>(r.integer("poincare.periods", 1, 10000000));
  cfg.poincare.stride = static_cast<int>(r.integer("poincare.stride", 1, 10000000));
  cfg.poincare.integrator.substeps_per_pulse = static_cast<int>(r.integer("poincare.substeps", 1, 100000));

  cfg.analysis.break_tolerance = r.real("analysis.break_tolerance", 0.0, 100.0);
  cfg.analysis.late_first = static_cast<int>(r.integer("analysis.late_first", 0, 10000000));
  cfg.analysis.late_last = static_cast<int>(r.integer("analysis.late_last", cfg.analysis.late_first, 10000000));
  return cfg;
}

LabConfig resolve_lab(const RawConfig& raw) {
  const Resolved r(raw, lab_keys());
  LabConfig out;
  out.echo = r.echo();
  const double rabi = r.real("lab.rabi_frequency", 0.0, kHuge);
  const double detuning = parse_real("lab.detuning_hz", r.text("lab.detuning_hz"));
  if (detuning == 0.0) throw ConfigError("lab.detuning_hz", "detuning must be nonzero");
  const double period = r.real("lab.kick_period", 0.0, kHuge, true);
  const double width = r.real("lab.pulse_width", 0.0, kHuge, true);
  const double separation = r.real("lab.pulse_separation", 0.0, kHuge);
  out.lab = LabParameters::cesium(rabi, detuning, period, width, separation);
  out.lab.recoil_frequency = 2.0 * std::numbers::pi * r.real("lab.recoil_hz", 0.0, kHuge, true);
  out.lab.kick_strength_rms_spread = r.real("lab.kick_spread", 0.0, 1.0);
  out.eta = r.real("lab.eta", 0.0, 1.0);
  try {
    out.lab.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("lab.pulse_separation", e.what());
  }
  return out;
}

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"fig2",
       "engine = poincare\nseed = 1\ntrain = double\nk = 70, 300\n"
       "[poincare]\nphi_points = 40\nrho_points = 40\nrho_span = 10pi\nperiods = 2000\nstride = 10\n"},
      {"fig3",
       "engine = compare\nseed = 1\ntrain = double\nk = 310\neta = 0\nkicks = 56\n"
       "[lineshape]\nkicks = 56\nblur = 0.8\n"},
      {"fig4",
       "engine = quantum\nseed = 1\ntrain = double\nk = 300\neta = 0\nkicks = 68\n"
       "[lineshape]\nkicks = 3, 6, 44, 66\n"},
      {"fig5", "engine = compare\nseed = 1\ntrain = double\nk = 310, 240, 120\neta = 0\nkicks = 70\n"},
      {"fig6",
       "engine = quantum\nseed = 1\ntrain = double\nk = 310, 240, 120\neta = 0.021, 0.017, 0.008\n"
       "kicks = 70\n"},
      {"fig7",
       "engine = quantum\nseed = 1\ntrain = double, single\nk = 300\neta = 0.02\nkicks = 50\n"
       "[lineshape]\nkicks = 50\n"},
      {"fig8",
       "engine = quantum\nseed = 1\ntrain = double, single\nk = 300\neta = 0.02\nkicks = 50\n"
       "[lineshape]\nkicks = 50\nblur = 0.8\n"},
      {"fig9", "engine = quantum\nseed = 1\ntrain = single, double\nk = 300\neta = 0.02\nkicks = 70\n"},
  };
  return table;
}

}  // namespace

std::string figure_preset(const std::string& figure_id) {
  const auto it = presets().find(figure_id);
  if (it == presets().end()) throw ConfigError("figure", "unknown figure id '" + figure_id + "' (fig2..fig9)");
  return "output = " + figure_id + "\n" + it->second;
}

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, text] : presets()) ids.push_back(id);
  return ids;
}

}  // namespace cantori
