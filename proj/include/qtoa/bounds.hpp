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

#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qtoa/estimators.hpp"
#include "qtoa/states.hpp"

namespace qtoa {

/// How the ensemble's energy spread follows from the single-photon spread.
enum class EnergyDerivation {
    Classical,          // independent units add in quadrature: sqrt(count) * dE
    Entangled,          // M * dE
    Squeezed,           // N * dE
    EntangledSqueezed,  // M * N * dE
};

std::string to_string(EnergyDerivation derivation);

/// Energies in angular-frequency units (hbar = 1), measured from a ground
/// state of zero.
struct EnergyProfile {
    double mean_energy;
    double energy_spread;
    EnergyDerivation derivation;
};

/// Profile of a model with E_single = center frequency and dE_single =
/// spectral std. Partial pairs combine M/2 pairs of spread 2 dE classically;
/// the twin beam uses the spread of the relative-delay generator (H1 - H2)/2.
EnergyProfile energy_profile(const StateModel &model);

/// Minimum time to reach an orthogonal state: pi / (2 dE).
double orthogonality_bound(const EnergyProfile &profile);

/// Margolus-Levitin time 2 / (pi E).
double ml_bound(const EnergyProfile &profile);

/// Orthogonalization time per unit of achievable timing std. With it the
/// orthogonality bound becomes the single-shot floor 1 / (2 dE), which a
/// Gaussian pulse saturates.
inline constexpr double kOrthogonalTimePerStd = std::numbers::pi;

/// Smallest std any estimator can reach: max(orthogonality, ML) / pi.
double timing_floor(const EnergyProfile &profile);

struct BoundViolation {
    std::size_t index;
    double empirical_std;
    double floor;
};

/// True unless the report's spread sits below the floor by more than three
/// of its own standard errors.
bool bound_ok(const AccuracyReport &report, const EnergyProfile &profile);

/// Reports whose empirical spread undercuts the timing floor. `profiles`
/// must pair one-to-one with `reports`.
std::vector<BoundViolation> check_reports(std::span<const AccuracyReport> reports,
                                          std::span<const EnergyProfile> profiles);
std::vector<BoundViolation> check_reports(std::span<const AccuracyReport> reports);

}  // namespace qtoa
