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

#include "qtoa/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace qtoa::csv {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

void write_report_header(std::ostream &out) {
    out << "model,M,N,eta,trials,kept,empirical_std,analytic_std,ratio,bound_ok,status\n";
}

void write_report_row(std::ostream &out, const AccuracyReport &report, bool bound_ok, double time_scale) {
    out << report.model.name() << ',' << report.model.detectors() << ','
        << format_number(report.model.photons_per_pulse()) << ',' << format_number(report.eta) << ','
        << report.trials_attempted << ',' << report.trials_kept << ','
        << format_number(report.empirical_std * time_scale) << ','
        << format_number(report.analytic.delta_t * time_scale) << ',' << format_number(report.ratio) << ','
        << (bound_ok ? "true" : "false") << ',' << kStatusOk << '\n';
}

void write_failed_row(std::ostream &out, const StateModel &model, double eta, std::size_t trials, std::size_t kept) {
    out << model.name() << ',' << model.detectors() << ',' << format_number(model.photons_per_pulse()) << ','
        << format_number(eta) << ',' << trials << ',' << kept << ",,,,," << kStatusInsufficient << '\n';
}

void write_fit_header(std::ostream &out) { out << "axis,exponent,stderr,intercept\n"; }

void write_fit_row(std::ostream &out, const ScalingFit &fit) {
    out << to_string(fit.axis) << ',' << format_number(fit.exponent) << ',' << format_number(fit.slope_stderr) << ','
        << format_number(fit.intercept) << '\n';
}

void write_region_map(std::ostream &out, const RegionMap &map) {
    out << "M,eta,winner\n";
    for (std::size_t i = 0; i < map.m_values.size(); ++i) {
        for (std::size_t j = 0; j < map.eta_grid.size(); ++j) {
            out << map.m_values[i] << ',' << format_number(map.eta_grid[j]) << ',' << to_string(map.at(i, j))
                << '\n';
        }
    }
}

void write_trial_dump(std::ostream &out, std::span<const TrialRecord> records, double time_scale) {
    out << "trial,detector,photon,time,retained\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto &detectors = records[k].per_detector;
        for (std::size_t d = 0; d < detectors.size(); ++d) {
            const auto &photons = detectors[d].photons;
            for (std::size_t p = 0; p < photons.size(); ++p) {
                out << k << ',' << d << ',' << p << ',' << format_number(photons[p].time * time_scale) << ','
                    << (photons[p].retained ? "true" : "false") << '\n';
            }
        }
    }
}

}  // namespace qtoa::csv
