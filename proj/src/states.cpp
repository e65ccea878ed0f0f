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

#include "qtoa/states.hpp"

#include <array>
#include <cmath>

#include "qtoa/errors.hpp"

namespace qtoa {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<const char *, 7> kModelNames = {
    "classical_coherent", "unentangled_singles", "entangled_singles", "fock_pulse",
    "entangled_fock",     "partial_pairs",       "twin_beam",
};

void require_count(int value, const char *what) {
    if (value < 1) {
        throw InvalidModelError(std::string(what) + " must be >= 1, got " + std::to_string(value));
    }
}

void check_efficiency(double eta) {
    if (std::isnan(eta) || eta > 1.0) {
        throw InvalidArgument("efficiency must lie in (0, 1]");
    }
    if (eta <= 0.0) {
        throw DegenerateEfficiencyError("efficiency 0 detects nothing; accuracy is undefined");
    }
}

}  // namespace

std::string to_string(ModelKind kind) { return kModelNames[static_cast<std::size_t>(kind)]; }

std::optional<ModelKind> model_kind_from_string(const std::string &name) {
    for (std::size_t i = 0; i < kModelNames.size(); ++i) {
        if (name == kModelNames[i]) {
            return static_cast<ModelKind>(i);
        }
    }
    return std::nullopt;
}

int StateModel::detectors() const noexcept {
    return std::visit(overloaded{
                          [](const ClassicalCoherent &m) { return m.detectors; },
                          [](const UnentangledSingles &m) { return m.detectors; },
                          [](const EntangledSingles &m) { return m.detectors; },
                          [](const FockPulse &) { return 1; },
                          [](const EntangledFock &m) { return m.detectors; },
                          [](const PartialPairs &m) { return m.detectors; },
                          [](const TwinBeam &) { return 2; },
                      },
                      variant);
}

double StateModel::photons_per_pulse() const noexcept {
    return std::visit(overloaded{
                          [](const ClassicalCoherent &m) { return m.mean_photons; },
                          [](const FockPulse &m) { return static_cast<double>(m.photons); },
                          [](const EntangledFock &m) { return static_cast<double>(m.photons); },
                          [](const auto &) { return 1.0; },
                      },
                      variant);
}

void StateModel::validate() const {
    std::visit(overloaded{
                   [](const ClassicalCoherent &m) {
                       require_count(m.detectors, "M");
                       if (!(m.mean_photons >= 1.0) || !std::isfinite(m.mean_photons)) {
                           throw InvalidModelError("N must be a finite mean photon number >= 1");
                       }
                   },
                   [](const UnentangledSingles &m) { require_count(m.detectors, "M"); },
                   [](const EntangledSingles &m) { require_count(m.detectors, "M"); },
                   [](const FockPulse &m) { require_count(m.photons, "N"); },
                   [](const EntangledFock &m) {
                       require_count(m.detectors, "M");
                       require_count(m.photons, "N");
                   },
                   [](const PartialPairs &m) {
                       if (m.detectors < 2 || m.detectors % 2 != 0) {
                           throw InvalidModelError("partial_pairs needs an even M >= 2, got " +
                                                   std::to_string(m.detectors));
                       }
                   },
                   [](const TwinBeam &) {},
               },
               variant);
}

std::string to_string(const DensityDescriptor &descriptor) {
    return std::visit(overloaded{
                          [](const IidDensity &d) { return "IID(" + std::to_string(d.detectors) + ")"; },
                          [](const SumCorrelated &d) { return "SumCorrelated(" + std::to_string(d.count()) + ")"; },
                          [](const DifferenceCorrelated &) { return std::string("DifferenceCorrelated"); },
                          [](const GroupedSum &d) {
                              return "GroupedSum(" + std::to_string(d.group_size) + "," +
                                     std::to_string(d.group_count) + ")";
                          },
                      },
                      descriptor);
}

bool is_all_or_nothing(const DensityDescriptor &descriptor) noexcept {
    return std::holds_alternative<SumCorrelated>(descriptor) ||
           std::holds_alternative<DifferenceCorrelated>(descriptor);
}

DensityDescriptor joint_density_kind(const StateModel &model) {
    model.validate();
    return std::visit(overloaded{
                          [](const ClassicalCoherent &m) -> DensityDescriptor {
                              return IidDensity{m.detectors, m.mean_photons, true};
                          },
                          [](const UnentangledSingles &m) -> DensityDescriptor {
                              return IidDensity{m.detectors, 1.0, false};
                          },
                          [](const EntangledSingles &m) -> DensityDescriptor { return SumCorrelated{m.detectors, 1}; },
                          [](const FockPulse &m) -> DensityDescriptor { return SumCorrelated{1, m.photons}; },
                          [](const EntangledFock &m) -> DensityDescriptor {
                              return SumCorrelated{m.detectors, m.photons};
                          },
                          [](const PartialPairs &m) -> DensityDescriptor { return GroupedSum{2, m.detectors / 2}; },
                          [](const TwinBeam &) -> DensityDescriptor { return DifferenceCorrelated{}; },
                      },
                      model.variant);
}

AccuracyPrediction analytic_accuracy(const StateModel &model, double eta) {
    model.validate();
    check_efficiency(eta);
    return analytic_accuracy(model, eta, moments(model.spectrum));
}

AccuracyPrediction analytic_accuracy(const StateModel &model, double eta, const TimeMoments &m) {
    model.validate();
    check_efficiency(eta);
    const double dt = m.delta_tau;
    struct Parts {
        double delta_t, keep;
    };
    const Parts parts = std::visit(
        overloaded{
            [&](const ClassicalCoherent &s) {
                return Parts{dt / std::sqrt(s.detectors * s.mean_photons * eta), 1.0};
            },
            [&](const UnentangledSingles &s) { return Parts{dt / std::sqrt(s.detectors * eta), 1.0}; },
            [&](const EntangledSingles &s) { return Parts{dt / s.detectors, std::pow(eta, s.detectors)}; },
            [&](const FockPulse &s) { return Parts{dt / s.photons, std::pow(eta, s.photons)}; },
            [&](const EntangledFock &s) {
                const double k = static_cast<double>(s.detectors) * s.photons;
                return Parts{dt / k, std::pow(eta, k)};
            },
            [&](const PartialPairs &s) {
                return Parts{dt / (2.0 * std::sqrt(s.detectors / 2.0)), eta * eta};
            },
            [&](const TwinBeam &) { return Parts{dt, eta * eta}; },
        },
        model.variant);
    return AccuracyPrediction{parts.delta_t, parts.keep, parts.delta_t / std::sqrt(parts.keep)};
}

}  // namespace qtoa
