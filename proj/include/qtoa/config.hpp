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

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "qtoa/estimators.hpp"
#include "qtoa/sampler.hpp"
#include "qtoa/spectra.hpp"
#include "qtoa/states.hpp"

namespace qtoa {

/// Scenario file contents. See README.md for the section/key schema.
struct ScenarioConfig {
    struct SpectrumBlock {
        SpectrumKind kind = SpectrumKind::Gaussian;
        double center = 50.0;
        double width = 1.0;
        std::string table;
        bool operator==(const SpectrumBlock &) const = default;
    };
    struct ModelBlock {
        ModelKind variant = ModelKind::EntangledSingles;
        int detectors = 1;
        double photons = 1.0;
        bool operator==(const ModelBlock &) const = default;
    };
    struct ScalingBlock {
        ScalingAxis axis = ScalingAxis::M;
        std::vector<double> values;
        bool operator==(const ScalingBlock &) const = default;
    };
    struct LossMapBlock {
        std::vector<int> m_values;
        std::vector<double> eta_values;
        bool operator==(const LossMapBlock &) const = default;
    };

    SpectrumBlock spectrum;
    ModelBlock model;
    double eta = 1.0;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<ScalingBlock> scaling;
    LossMapBlock loss_map;
    std::size_t grid_size = kDefaultGridSize;
    double window_factor = 10.0;
    double time_unit = 1.0;
    double length_unit = 1.0;
    std::string output_path;
    bool dump_trials = false;

    bool operator==(const ScenarioConfig &) const = default;
};

/// Parses INI text, applies defaults and checks every field. Throws
/// ConfigError naming the offending `section.key`.
ScenarioConfig parse_config(std::istream &in);
ScenarioConfig parse_config_text(const std::string &text);
ScenarioConfig load_config(const std::string &path);

/// Re-checks an in-memory config and fills defaults.
ScenarioConfig validate(ScenarioConfig config);

/// Canonical INI text; parse_config_text(serialize(c)) == validate(c).
std::string serialize(const ScenarioConfig &config);

/// Spectrum and model described by the config. Warnings from loading a
/// tabulated spectrum are appended to `warnings` when given.
StateModel build_model(const ScenarioConfig &config, std::vector<std::string> *warnings = nullptr);

SamplerOptions sampler_options(const ScenarioConfig &config);

}  // namespace qtoa
