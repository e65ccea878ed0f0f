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

#include "qtoa/loss_analysis.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "qtoa/errors.hpp"
#include "qtoa/estimators.hpp"
#include "qtoa/states.hpp"

namespace qtoa {
namespace {

// analytic_accuracy in units of Delta tau.
constexpr TimeMoments kUnitMoments{0.0, 1.0, 1.0, 1.0};

// The spectrum only enters through Delta tau, which kUnitMoments fixes.
StateModel strategy_model(Strategy strategy, int detectors, const Spectrum &spectrum) {
    switch (strategy) {
        case Strategy::Entangled:
            return StateModel{EntangledSingles{detectors}, spectrum};
        case Strategy::PartialPairs:
            return StateModel{PartialPairs{detectors}, spectrum};
        case Strategy::Unentangled:
            break;
    }
    return StateModel{UnentangledSingles{detectors}, spectrum};
}

const Spectrum &placeholder_spectrum() {
    static const Spectrum spectrum = Spectrum::gaussian(50.0, 1.0);
    return spectrum;
}

double bisect_log_ratio(Strategy challenger, int detectors) {
    auto f = [&](double eta) {
        return std::log(effective_std(challenger, detectors, eta)) -
               std::log(effective_std(Strategy::Unentangled, detectors, eta));
    };
    boost::math::tools::eps_tolerance<double> tol(50);
    const auto bracket = boost::math::tools::bisect(f, 1e-6, 1.0, tol);
    return 0.5 * (bracket.first + bracket.second);
}

}  // namespace

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Unentangled:
            return "unentangled";
        case Strategy::PartialPairs:
            return "partial_pairs";
        case Strategy::Entangled:
            return "entangled";
    }
    return "unknown";
}

double effective_std(Strategy strategy, int detectors, double eta) {
    return analytic_accuracy(strategy_model(strategy, detectors, placeholder_spectrum()), eta, kUnitMoments)
        .effective_delta_t;
}

double threshold_entangled(int detectors, ThresholdMethod method) {
    if (detectors < 2) {
        throw UndefinedThresholdError("entangled and unentangled singles coincide for M = 1");
    }
    if (method == ThresholdMethod::ClosedForm) {
        return std::pow(static_cast<double>(detectors), -1.0 / (detectors - 1));
    }
    return bisect_log_ratio(Strategy::Entangled, detectors);
}

double threshold_partial_pairs(ThresholdMethod method, int detectors) {
    if (method == ThresholdMethod::ClosedForm) {
        return 0.5;
    }
    return bisect_log_ratio(Strategy::PartialPairs, detectors);
}

RegionMap region_map(std::span<const int> m_values, std::span<const double> eta_grid) {
    if (m_values.empty() || eta_grid.empty()) {
        throw InvalidArgument("region map needs non-empty M and eta grids");
    }
    RegionMap map;
    map.m_values.assign(m_values.begin(), m_values.end());
    map.eta_grid.assign(eta_grid.begin(), eta_grid.end());
    map.cells.reserve(m_values.size() * eta_grid.size());
    for (const int m : m_values) {
        if (m < 1) {
            throw InvalidArgument("region map M values must be >= 1");
        }
        for (const double eta : eta_grid) {
            if (!(eta > 0.0 && eta <= 1.0)) {
                throw InvalidArgument("region map efficiencies must lie in (0, 1]");
            }
            Strategy best = Strategy::Unentangled;
            double best_std = effective_std(Strategy::Unentangled, m, eta);
            for (const Strategy s : {Strategy::PartialPairs, Strategy::Entangled}) {
                if (s == Strategy::PartialPairs && m % 2 != 0) {
                    continue;
                }
                const double candidate = effective_std(s, m, eta);
                // Strictly better by more than rounding; ties stay with the less entangled strategy.
                if (candidate < best_std * (1.0 - 1e-12)) {
                    best = s;
                    best_std = candidate;
                }
            }
            map.cells.push_back(best);
        }
    }
    return map;
}

bool is_monotone(const RegionMap &map) {
    std::vector<std::size_t> order(map.eta_grid.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        order[j] = j;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return map.eta_grid[a] < map.eta_grid[b]; });
    for (std::size_t i = 0; i < map.m_values.size(); ++i) {
        for (std::size_t j = 1; j < order.size(); ++j) {
            if (static_cast<int>(map.at(i, order[j])) < static_cast<int>(map.at(i, order[j - 1]))) {
                return false;
            }
        }
    }
    return true;
}

double monte_carlo_crossover(Strategy challenger, int detectors, const CrossoverOptions &options) {
    if (challenger == Strategy::Unentangled) {
        throw InvalidArgument("crossover needs an entangled challenger");
    }
    if (challenger == Strategy::Entangled && detectors < 2) {
        throw UndefinedThresholdError("entangled and unentangled singles coincide for M = 1");
    }
    if (!(options.lower > 0.0 && options.lower < options.upper && options.upper <= 1.0) ||
        !(options.tolerance > 0.0)) {
        throw InvalidArgument("crossover bracket must satisfy 0 < lower < upper <= 1 with tolerance > 0");
    }
    const TrialSampler challenger_sampler(strategy_model(challenger, detectors, options.spectrum));
    const TrialSampler baseline_sampler(strategy_model(Strategy::Unentangled, detectors, options.spectrum));

    auto spread = [&](const TrialSampler &sampler, double eta) {
        try {
            return run_campaign(sampler, eta, options.trials_per_point, options.seed, options.threads)
                .empirical_effective_std;
        } catch (const InsufficientStatistics &) {
            return std::numeric_limits<double>::infinity();
        }
    };

    double lo = options.lower;
    double hi = options.upper;
    while (hi - lo > options.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (spread(challenger_sampler, mid) < spread(baseline_sampler, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qtoa
