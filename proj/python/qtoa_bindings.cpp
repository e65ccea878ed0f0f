// Copyright 2026 The qtoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qtoa/bounds.hpp"
#include "qtoa/config.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/estimators.hpp"
#include "qtoa/loss_analysis.hpp"
#include "qtoa/sampler.hpp"
#include "qtoa/spectra.hpp"
#include "qtoa/states.hpp"

namespace py = pybind11;
using namespace qtoa;

namespace {

std::vector<std::pair<double, double>> trial_estimates(const StateModel &model, double eta, std::size_t trials,
                                                       std::uint64_t seed, unsigned threads,
                                                       std::size_t grid_size) {
    SamplerOptions options;
    options.grid_size = grid_size;
    const TrialSampler sampler(model, options);
    const auto estimates = map_campaign(sampler, eta, trials, seed, threads,
                                        [](std::size_t, const TrialRecord &r) { return trial_estimate(r); });
    std::vector<std::pair<double, double>> out;
    out.reserve(estimates.size());
    for (const auto &e : estimates) {
        out.emplace_back(e.value, e.weight);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base);
    py::register_exception<ResolutionError>(m, "ResolutionError", base);
    py::register_exception<DivergentMomentError>(m, "DivergentMomentError", base);
    py::register_exception<TableConstructionError>(m, "TableConstructionError", base);
    py::register_exception<DegenerateEfficiencyError>(m, "DegenerateEfficiencyError", base);
    py::register_exception<InvalidModelError>(m, "InvalidModelError", base);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", base);
    py::register_exception<InsufficientStatistics>(m, "InsufficientStatistics", base);
    py::register_exception<FitError>(m, "FitError", base);
    py::register_exception<UndefinedThresholdError>(m, "UndefinedThresholdError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    py::enum_<SpectrumKind>(m, "SpectrumKind")
        .value("Gaussian", SpectrumKind::Gaussian)
        .value("Lorentzian", SpectrumKind::Lorentzian)
        .value("Tabulated", SpectrumKind::Tabulated);

    py::class_<Spectrum>(m, "Spectrum")
        .def_static("gaussian", &Spectrum::gaussian, py::arg("center_frequency"), py::arg("width"))
        .def_static("lorentzian", &Spectrum::lorentzian, py::arg("center_frequency"), py::arg("width"))
        .def_static(
            "tabulated",
            [](const std::vector<double> &omega, const std::vector<double> &power) {
                if (omega.size() != power.size()) {
                    throw InvalidArgument("omega and power must have equal length");
                }
                std::vector<SpectralSample> samples;
                for (std::size_t i = 0; i < omega.size(); ++i) {
                    samples.push_back({omega[i], power[i]});
                }
                return Spectrum::tabulated(std::move(samples));
            },
            py::arg("omega"), py::arg("power"))
        .def_static(
            "load_csv", [](const std::filesystem::path &path) { return load_tabulated_csv(path).spectrum; },
            py::arg("path"))
        .def_property_readonly("kind", &Spectrum::kind)
        .def_property_readonly("center_frequency", &Spectrum::center_frequency)
        .def_property_readonly("width", &Spectrum::width)
        .def("power", &Spectrum::power, py::arg("omega"))
        .def("amplitude", &Spectrum::amplitude, py::arg("t"))
        .def("density", &Spectrum::density, py::arg("t"))
        .def("frequency_spread", &Spectrum::frequency_spread)
        .def(py::self == py::self)
        .def("__repr__", [](const Spectrum &s) {
            return "Spectrum." + to_string(s.kind()) + "(center=" + std::to_string(s.center_frequency()) +
                   ", width=" + std::to_string(s.width()) + ")";
        });

    py::class_<TimeMoments>(m, "TimeMoments")
        .def_readonly("tau_bar", &TimeMoments::tau_bar)
        .def_readonly("delta_tau", &TimeMoments::delta_tau)
        .def_readonly("delta_omega", &TimeMoments::delta_omega)
        .def_readonly("window_half_width", &TimeMoments::window_half_width);
    m.def(
        "moments", [](const Spectrum &s) { return moments(s); }, py::arg("spectrum"));

    py::class_<InverseCdfTable>(m, "InverseCdfTable")
        .def("quantile", &InverseCdfTable::quantile, py::arg("u"))
        .def("cdf", &InverseCdfTable::cdf, py::arg("t"))
        .def_property_readonly("size", &InverseCdfTable::size)
        .def_property_readonly("max_cdf_error", &InverseCdfTable::max_cdf_error);
    m.def(
        "inverse_cdf_table", [](const Spectrum &s, std::size_t n) { return inverse_cdf_table(s, n); },
        py::arg("spectrum"), py::arg("grid_size") = kDefaultGridSize);

    py::class_<StateModel>(m, "StateModel")
        .def_static(
            "classical_coherent",
            [](const Spectrum &s, int M, double N) { return StateModel{ClassicalCoherent{M, N}, s}; },
            py::arg("spectrum"), py::arg("M"), py::arg("N"))
        .def_static(
            "unentangled_singles", [](const Spectrum &s, int M) { return StateModel{UnentangledSingles{M}, s}; },
            py::arg("spectrum"), py::arg("M"))
        .def_static(
            "entangled_singles", [](const Spectrum &s, int M) { return StateModel{EntangledSingles{M}, s}; },
            py::arg("spectrum"), py::arg("M"))
        .def_static(
            "fock_pulse", [](const Spectrum &s, int N) { return StateModel{FockPulse{N}, s}; },
            py::arg("spectrum"), py::arg("N"))
        .def_static(
            "entangled_fock", [](const Spectrum &s, int M, int N) { return StateModel{EntangledFock{M, N}, s}; },
            py::arg("spectrum"), py::arg("M"), py::arg("N"))
        .def_static(
            "partial_pairs", [](const Spectrum &s, int M) { return StateModel{PartialPairs{M}, s}; },
            py::arg("spectrum"), py::arg("M"))
        .def_static(
            "twin_beam", [](const Spectrum &s) { return StateModel{TwinBeam{}, s}; }, py::arg("spectrum"))
        .def_property_readonly("name", &StateModel::name)
        .def_property_readonly("detectors", &StateModel::detectors)
        .def_property_readonly("photons_per_pulse", &StateModel::photons_per_pulse)
        .def_readonly("spectrum", &StateModel::spectrum)
        .def("validate", &StateModel::validate)
        .def("joint_density_kind", [](const StateModel &s) { return to_string(joint_density_kind(s)); });

    py::class_<AccuracyPrediction>(m, "AccuracyPrediction")
        .def_readonly("delta_t", &AccuracyPrediction::delta_t)
        .def_readonly("keep_probability", &AccuracyPrediction::keep_probability)
        .def_readonly("effective_delta_t", &AccuracyPrediction::effective_delta_t);
    m.def(
        "analytic_accuracy", [](const StateModel &s, double eta) { return analytic_accuracy(s, eta); },
        py::arg("model"), py::arg("eta") = 1.0);

    py::class_<AccuracyReport>(m, "AccuracyReport")
        .def_readonly("model", &AccuracyReport::model)
        .def_readonly("eta", &AccuracyReport::eta)
        .def_readonly("trials_attempted", &AccuracyReport::trials_attempted)
        .def_readonly("trials_kept", &AccuracyReport::trials_kept)
        .def_readonly("mean_estimate", &AccuracyReport::mean_estimate)
        .def_readonly("empirical_std", &AccuracyReport::empirical_std)
        .def_readonly("empirical_effective_std", &AccuracyReport::empirical_effective_std)
        .def_readonly("empirical_keep", &AccuracyReport::empirical_keep)
        .def_readonly("std_rel_error", &AccuracyReport::std_rel_error)
        .def_readonly("analytic", &AccuracyReport::analytic)
        .def_readonly("ratio", &AccuracyReport::ratio);
    m.def(
        "run_campaign",
        [](const StateModel &s, double eta, std::size_t trials, std::uint64_t seed, unsigned threads,
           std::size_t grid_size) {
            CampaignOptions options;
            options.threads = threads;
            options.sampler.grid_size = grid_size;
            py::gil_scoped_release release;
            return run_campaign(s, eta, trials, seed, options);
        },
        py::arg("model"), py::arg("eta") = 1.0, py::arg("trials") = 100000, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("grid_size") = kDefaultGridSize);
    m.def(
        "trial_estimates",
        [](const StateModel &s, double eta, std::size_t trials, std::uint64_t seed, unsigned threads,
           std::size_t grid_size) {
            py::gil_scoped_release release;
            return trial_estimates(s, eta, trials, seed, threads, grid_size);
        },
        py::arg("model"), py::arg("eta") = 1.0, py::arg("trials") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("grid_size") = kDefaultGridSize,
        "(value, weight) per trial; weight 0 marks a discarded trial.");

    py::enum_<ScalingAxis>(m, "ScalingAxis").value("M", ScalingAxis::M).value("N", ScalingAxis::N);
    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("axis", &ScalingFit::axis)
        .def_readonly("exponent", &ScalingFit::exponent)
        .def_readonly("intercept", &ScalingFit::intercept)
        .def_readonly("stderr", &ScalingFit::slope_stderr)
        .def_readonly("points", &ScalingFit::points);
    m.def(
        "fit_scaling",
        [](const std::vector<AccuracyReport> &reports, ScalingAxis axis) { return fit_scaling(reports, axis); },
        py::arg("reports"), py::arg("axis"));

    py::enum_<ThresholdMethod>(m, "ThresholdMethod")
        .value("ClosedForm", ThresholdMethod::ClosedForm)
        .value("Bisection", ThresholdMethod::Bisection);
    m.def("threshold_entangled", &threshold_entangled, py::arg("M"),
          py::arg("method") = ThresholdMethod::ClosedForm);
    m.def("threshold_partial_pairs", &threshold_partial_pairs, py::arg("method") = ThresholdMethod::ClosedForm,
          py::arg("M") = 4);

    py::enum_<Strategy>(m, "Strategy")
        .value("Unentangled", Strategy::Unentangled)
        .value("PartialPairs", Strategy::PartialPairs)
        .value("Entangled", Strategy::Entangled);
    m.def("effective_std", &effective_std, py::arg("strategy"), py::arg("M"), py::arg("eta"));
    py::class_<RegionMap>(m, "RegionMap")
        .def_readonly("m_values", &RegionMap::m_values)
        .def_readonly("eta_grid", &RegionMap::eta_grid)
        .def("at", &RegionMap::at, py::arg("m_index"), py::arg("eta_index"))
        .def("is_monotone", [](const RegionMap &r) { return is_monotone(r); });
    m.def(
        "region_map",
        [](const std::vector<int> &ms, const std::vector<double> &etas) { return region_map(ms, etas); },
        py::arg("m_values"), py::arg("eta_grid"));

    py::class_<EnergyProfile>(m, "EnergyProfile")
        .def_readonly("mean_energy", &EnergyProfile::mean_energy)
        .def_readonly("energy_spread", &EnergyProfile::energy_spread);
    m.def("energy_profile", &energy_profile, py::arg("model"));
    m.def("orthogonality_bound", &orthogonality_bound, py::arg("profile"));
    m.def("ml_bound", &ml_bound, py::arg("profile"));
    m.def("timing_floor", &timing_floor, py::arg("profile"));
    m.def(
        "bound_violations",
        [](const std::vector<AccuracyReport> &reports) {
            std::vector<std::size_t> indices;
            for (const auto &v : check_reports(reports)) {
                indices.push_back(v.index);
            }
            return indices;
        },
        py::arg("reports"));
}
