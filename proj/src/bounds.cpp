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

#include "qtoa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtoa/errors.hpp"

namespace qtoa {

std::string to_string(EnergyDerivation derivation) {
    switch (derivation) {
        case EnergyDerivation::Classical:
            return "classical";
        case EnergyDerivation::Entangled:
            return "entangled";
        case EnergyDerivation::Squeezed:
            return "squeezed";
        case EnergyDerivation::EntangledSqueezed:
            return "entangled_squeezed";
    }
    return "unknown";
}

EnergyProfile energy_profile(const StateModel &model) {
    const double e = model.spectrum.center_frequency();
    const double de = model.spectrum.frequency_spread();
    if (!(e > 0.0)) {
        throw InvalidArgument("energy bounds need a positive center frequency (ground state at zero)");
    }
    const double m = model.detectors();
    const double n = model.photons_per_pulse();
    switch (model.kind()) {
        case ModelKind::ClassicalCoherent:
            return {m * n * e, std::sqrt(m * n) * de, EnergyDerivation::Classical};
        case ModelKind::UnentangledSingles:
            return {m * e, std::sqrt(m) * de, EnergyDerivation::Classical};
        case ModelKind::EntangledSingles:
            return {m * e, m * de, EnergyDerivation::Entangled};
        case ModelKind::FockPulse:
            return {n * e, n * de, EnergyDerivation::Squeezed};
        case ModelKind::EntangledFock:
            return {m * n * e, m * n * de, EnergyDerivation::EntangledSqueezed};
        case ModelKind::PartialPairs:
            return {m * e, std::sqrt(m / 2.0) * 2.0 * de, EnergyDerivation::Classical};
        case ModelKind::TwinBeam:
            return {2.0 * e, de, EnergyDerivation::Entangled};
    }
    throw InvalidArgument("unknown model kind");
}

double orthogonality_bound(const EnergyProfile &profile) {
    if (!(profile.energy_spread > 0.0)) {
        throw InvalidArgument("energy spread must be > 0");
    }
    return std::numbers::pi / (2.0 * profile.energy_spread);
}

double ml_bound(const EnergyProfile &profile) {
    if (!(profile.mean_energy > 0.0)) {
        throw InvalidArgument("mean energy must be > 0");
    }
    return 2.0 / (std::numbers::pi * profile.mean_energy);
}

double timing_floor(const EnergyProfile &profile) {
    return std::max(orthogonality_bound(profile), ml_bound(profile)) / kOrthogonalTimePerStd;
}

bool bound_ok(const AccuracyReport &report, const EnergyProfile &profile) {
    return report.empirical_std * (1.0 + 3.0 * report.std_rel_error) >= timing_floor(profile);
}

std::vector<BoundViolation> check_reports(std::span<const AccuracyReport> reports,
                                          std::span<const EnergyProfile> profiles) {
    if (reports.size() != profiles.size()) {
        throw InvalidArgument("check_reports needs one energy profile per report");
    }
    std::vector<BoundViolation> violations;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!bound_ok(reports[i], profiles[i])) {
            violations.push_back({i, reports[i].empirical_std, timing_floor(profiles[i])});
        }
    }
    return violations;
}

std::vector<BoundViolation> check_reports(std::span<const AccuracyReport> reports) {
    std::vector<EnergyProfile> profiles;
    profiles.reserve(reports.size());
    for (const auto &r : reports) {
        profiles.push_back(energy_profile(r.model));
    }
    return check_reports(reports, profiles);
}

}  // namespace qtoa
