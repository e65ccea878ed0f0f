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

#include <optional>
#include <string>
#include <variant>

#include "qtoa/spectra.hpp"

namespace qtoa {

/// M coherent pulses, Poissonian photon number with mean N each.
struct ClassicalCoherent {
    int detectors = 1;
    double mean_photons = 1.0;
};

/// M independent single photons with identical spectra.
struct UnentangledSingles {
    int detectors = 1;
};

/// M single photons sharing one frequency variable.
struct EntangledSingles {
    int detectors = 1;
};

/// One pulse holding exactly N photons of a common frequency.
struct FockPulse {
    int photons = 1;
};

/// M entangled pulses, each an N-photon Fock state.
struct EntangledFock {
    int detectors = 1;
    int photons = 1;
};

/// M/2 independent maximally entangled pairs.
struct PartialPairs {
    int detectors = 2;
};

/// Two-photon downconversion state optimized for arrival-time differences.
struct TwinBeam {};

using StateVariant =
    std::variant<ClassicalCoherent, UnentangledSingles, EntangledSingles, FockPulse, EntangledFock, PartialPairs, TwinBeam>;

enum class ModelKind {
    ClassicalCoherent,
    UnentangledSingles,
    EntangledSingles,
    FockPulse,
    EntangledFock,
    PartialPairs,
    TwinBeam,
};

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(const std::string &name);

struct StateModel {
    StateVariant variant;
    Spectrum spectrum;

    ModelKind kind() const noexcept { return static_cast<ModelKind>(variant.index()); }
    std::string name() const { return to_string(kind()); }

    /// Number of detectors (pulses). TwinBeam has two.
    int detectors() const noexcept;
    /// Photons per pulse: mean for coherent pulses, exact otherwise.
    double photons_per_pulse() const noexcept;

    /// Throws InvalidModelError when a count or parity invariant fails.
    void validate() const;
};

/// Independent arrivals; coherent pulses draw Poisson counts per detector.
struct IidDensity {
    int detectors;
    double mean_photons;
    bool poisson_counts;
};

/// All `detectors * photons_per_detector` arrivals share |g(sum t)|^2.
struct SumCorrelated {
    int detectors;
    int photons_per_detector;

    int count() const noexcept { return detectors * photons_per_detector; }
};

/// Two arrivals with difference distributed as |g(t1 - t2)|^2.
struct DifferenceCorrelated {};

/// `group_count` independent sum-correlated groups of `group_size` detectors.
struct GroupedSum {
    int group_size;
    int group_count;
};

using DensityDescriptor = std::variant<IidDensity, SumCorrelated, DifferenceCorrelated, GroupedSum>;

std::string to_string(const DensityDescriptor &descriptor);

/// True when losing any photon destroys the timing information of the trial.
bool is_all_or_nothing(const DensityDescriptor &descriptor) noexcept;

DensityDescriptor joint_density_kind(const StateModel &model);

struct AccuracyPrediction {
    /// Std of the trial estimator among kept trials.
    double delta_t;
    /// Probability a trial (or, for pairs, a pair) survives discard-on-loss.
    double keep_probability;
    /// Std per attempted trial.
    double effective_delta_t;
};

/// Closed-form accuracy for a model at detector efficiency `eta`.
/// Throws DegenerateEfficiencyError for eta <= 0.
AccuracyPrediction analytic_accuracy(const StateModel &model, double eta);
AccuracyPrediction analytic_accuracy(const StateModel &model, double eta, const TimeMoments &moments);

}  // namespace qtoa
