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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cantori/classical.hpp"
#include "cantori/config.hpp"
#include "cantori/density_matrix.hpp"
#include "cantori/experiment.hpp"
#include "cantori/lab_units.hpp"
#include "cantori/observables.hpp"
#include "cantori/pulse_train.hpp"
#include "cantori/quantum.hpp"

namespace py = pybind11;
using namespace cantori;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

MomentumDistribution from_array(const Array& p, double bin_width) {
  if (p.ndim() != 1 || p.shape(0) % 2 == 0)
    throw std::invalid_argument("probabilities must be 1-D with an odd number of bins");
  const auto n = static_cast<std::size_t>(p.shape(0));
  MomentumGrid grid(bin_width, (n - 1) / 2);
  return MomentumDistribution(grid, std::vector<double>(p.data(), p.data() + n));
}

py::dict distribution_dict(const MomentumDistribution& d) {
  std::vector<double> centers(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) centers[i] = d.center(i);
  py::dict out;
  out["rho"] = to_array(centers);
  out["probabilities"] = to_array(d.probabilities());
  out["bin_width"] = d.bin_width();
  return out;
}

PulseTrain train_from(const std::string& name) {
  if (name == "double") return PulseTrain::double_pulse();
  if (name == "single") return PulseTrain::single_pulse();
  throw std::invalid_argument("train must be 'double' or 'single'");
}

}  // namespace

PYBIND11_MODULE(_cantori, m) {
  m.doc() = "Double-pulse kicked-atom simulator";
  m.attr("__version__") = version_string();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  py::class_<PulseTrain>(m, "PulseTrain")
      .def(py::init<double, std::vector<double>>(), py::arg("pulse_width"), py::arg("leading_edges"))
      .def_static("double_pulse", &PulseTrain::double_pulse)
      .def_static("single_pulse", &PulseTrain::single_pulse)
      .def_property_readonly("pulse_width", &PulseTrain::pulse_width)
      .def_property_readonly("leading_edges", [](const PulseTrain& t) {
        return std::vector<double>(t.leading_edges().begin(), t.leading_edges().end());
      })
      .def_property_readonly("total_area", &PulseTrain::total_area)
      .def("__repr__", &PulseTrain::describe);

  m.def("pulse_envelope", &pulse_envelope, py::arg("t"), py::arg("train"));
  m.def("fourier_coefficient", &fourier_coefficient, py::arg("r"), py::arg("train"));
  m.def("kam_boundaries", &kam_boundaries, py::arg("train"), py::arg("r_max"));

  m.def(
      "dimensionless_from_lab",
      [](double rabi_frequency, double detuning_hz, double kick_period, double pulse_width,
         double pulse_separation) {
        const auto lab = LabParameters::cesium(rabi_frequency, detuning_hz, kick_period, pulse_width,
                                               pulse_separation);
        const auto conv = dimensionless_from_lab(lab);
        py::dict out;
        out["k"] = conv.params.kick_strength;
        out["kbar"] = conv.params.kbar;
        out["train"] = conv.train;
        return out;
      },
      py::arg("rabi_frequency"), py::arg("detuning_hz"), py::arg("kick_period") = 25e-6,
      py::arg("pulse_width") = 1.25e-6, py::arg("pulse_separation") = 2.5e-6,
      "Cs conversion: rabi_frequency in rad/s, detuning of the F'=5 line in Hz, times in s.");

  m.def(
      "one_period_map",
      [](double phi, double rho, double k, const PulseTrain& train, int substeps) {
        const auto s = one_period_map({phi, rho}, k, train, {substeps, SplittingOrder::sixth});
        return py::make_tuple(s.phi, s.rho);
      },
      py::arg("phi"), py::arg("rho"), py::arg("k"), py::arg("train"), py::arg("substeps") = 30);

  m.def(
      "poincare_section",
      [](double k, const std::string& train, std::size_t phi_points, std::size_t rho_points,
         double rho_span, int periods, int stride, unsigned threads) {
        const auto sec = poincare_section(seed_grid(phi_points, rho_points, rho_span), k,
                                          train_from(train), periods, {}, threads, stride);
        std::vector<double> phi, rho, max_abs;
        for (const auto& p : sec.points) {
          phi.push_back(p.phi);
          rho.push_back(p.rho);
        }
        for (const auto& o : sec.orbits) max_abs.push_back(std::max(std::abs(o.min_rho), std::abs(o.max_rho)));
        py::dict out;
        out["phi"] = to_array(phi);
        out["rho"] = to_array(rho);
        out["orbit_max_abs_rho"] = to_array(max_abs);
        return out;
      },
      py::arg("k"), py::arg("train") = "double", py::arg("phi_points") = 40,
      py::arg("rho_points") = 40, py::arg("rho_span") = 10.0 * 3.14159265358979323846,
      py::arg("periods") = 2000, py::arg("stride") = 10, py::arg("threads") = 0);

  m.def(
      "classical_diffusion",
      [](double k, const std::string& train, int kicks, std::size_t particles, double sigma,
         std::uint64_t seed, double rho_c, unsigned threads) {
        const auto grid = MomentumGrid::covering(40.0 * 3.14159265358979323846);
        const auto ens = init_thermal_ensemble(sigma, particles, seed);
        EnsembleOptions opt;
        opt.threads = threads;
        const auto dists = evolve_ensemble(ens, k, train_from(train), kicks, grid, opt);
        std::vector<double> percent;
        for (const auto& d : dists) percent.push_back(fraction_outside(d, rho_c));
        py::dict out;
        out["percent"] = to_array(percent);
        out["final"] = distribution_dict(dists.back());
        return out;
      },
      py::arg("k"), py::arg("train") = "double", py::arg("kicks") = 70,
      py::arg("particles") = 20000, py::arg("sigma") = 9.2, py::arg("seed") = 1,
      py::arg("rho_c") = 10.0 * 3.14159265358979323846, py::arg("threads") = 0);

  m.def(
      "quantum_diffusion",
      [](double k, const std::string& train, double eta, int kicks, std::size_t members, int n_max,
         int substeps, double kbar, double sigma, std::uint64_t seed, unsigned threads) {
        const auto mix = init_quantum_mixture(sigma, kbar, members, n_max, seed);
        QuantumOptions opt;
        opt.substeps_per_pulse = substeps;
        opt.threads = threads;
        const auto run = simulate_quantum({k, kbar, eta, kicks}, train_from(train), mix, opt);
        py::dict out;
        out["percent"] = to_array(run.fraction_outside);
        out["stderr"] = to_array(run.fraction_outside_stderr);
        out["max_norm_drift"] = run.max_norm_drift;
        out["emission_events"] = run.emission_events;
        out["final"] = distribution_dict(run.distributions.back());
        return out;
      },
      py::arg("k"), py::arg("train") = "double", py::arg("eta") = 0.0, py::arg("kicks") = 70,
      py::arg("members") = 64, py::arg("n_max") = 256, py::arg("substeps") = 50,
      py::arg("kbar") = 2.6, py::arg("sigma") = 9.2, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "cantorus_flux",
      [](double k, const std::string& train, std::size_t samples, double kbar, unsigned threads) {
        const auto f = cantorus_flux(k, train_from(train), 10.0 * 3.14159265358979323846, samples, kbar,
                                     {}, threads);
        py::dict out;
        out["flux_kbar"] = f.flux_in_kbar;
        out["stderr_kbar"] = f.statistical_error;
        out["net_flux_kbar"] = f.net_flux_in_kbar;
        return out;
      },
      py::arg("k"), py::arg("train") = "double", py::arg("samples") = 100000, py::arg("kbar") = 2.6,
      py::arg("threads") = 0);

  m.def(
      "fraction_outside",
      [](const Array& p, double bin_width, double rho_c) { return fraction_outside(from_array(p, bin_width), rho_c); },
      py::arg("probabilities"), py::arg("bin_width"), py::arg("rho_c"));
  m.def(
      "kinetic_energy", [](const Array& p, double bin_width) { return kinetic_energy(from_array(p, bin_width)); },
      py::arg("probabilities"), py::arg("bin_width"));
  m.def(
      "fit_localization_length",
      [](const Array& p, double bin_width, double lo, double hi) {
        const auto fit = fit_localization_length(from_array(p, bin_width), {lo, hi});
        py::dict out;
        out["l_rho"] = fit.l_rho;
        out["rms_residual"] = fit.rms_residual;
        out["non_exponential"] = fit.non_exponential;
        return out;
      },
      py::arg("probabilities"), py::arg("bin_width"), py::arg("lo") = 20.0, py::arg("hi") = 60.0);
  m.def(
      "detector_blur",
      [](const Array& p, double bin_width, double resolution) {
        const auto d = detector_blur(from_array(p, bin_width), resolution);
        return to_array(d.probabilities());
      },
      py::arg("probabilities"), py::arg("bin_width"), py::arg("resolution"));
  m.def(
      "break_time",
      [](std::vector<double> percent, double tolerance) -> py::object {
        const auto b = break_time(DiffusionCurve::from_series(std::move(percent), 0.0, 0.0, Engine::quantum),
                                  tolerance);
        if (b.kick) return py::int_(*b.kick);
        return py::none();
      },
      py::arg("percent"), py::arg("tolerance") = 4.0);

  m.def(
      "density_matrix_crosscheck",
      [](double k, double eta, int kicks, std::size_t samples, std::uint64_t seed) {
        CrosscheckParams p;
        p.k = k;
        p.eta = eta;
        p.num_kicks = kicks;
        p.mc_samples = samples;
        p.seed = seed;
        const auto r = density_matrix_crosscheck(p);
        py::dict out;
        out["sites"] = r.sites;
        out["exact"] = to_array(r.exact);
        out["monte_carlo"] = to_array(r.monte_carlo);
        out["stderr"] = to_array(r.monte_carlo_stderr);
        out["max_standard_score"] = r.max_standard_score;
        return out;
      },
      py::arg("k") = 5.0, py::arg("eta") = 0.2, py::arg("kicks") = 5, py::arg("samples") = 20000,
      py::arg("seed") = 1);

  m.def(
      "run_config",
      [](const std::string& text, std::vector<std::string> overrides, unsigned threads) {
        RawConfig raw = RawConfig::parse(text);
        for (const auto& o : overrides) raw.apply_override(o);
        const auto cfg = resolve_experiment(raw);
        RunOptions opt;
        opt.threads = threads;
        const auto r = run_experiment(cfg, opt);
        py::dict out;
        out["files"] = r.files;
        py::dict curves;
        for (const auto& c : r.curves) curves[py::str(c.label)] = to_array(c.percent);
        out["curves"] = curves;
        return out;
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{}, py::arg("threads") = 0);

  m.def("figure_preset", &figure_preset, py::arg("figure_id"));
}
