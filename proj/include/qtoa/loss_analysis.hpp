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
#include <span>
#include <string>
#include <vector>

#include "qtoa/spectra.hpp"

namespace qtoa {

enum class ThresholdMethod { ClosedForm, Bisection };

/// Efficiency above which M entangled singles beat M unentangled singles
/// per attempted trial: eta* = M^(-1/(M-1)). Throws UndefinedThresholdError
/// for M = 1.
double threshold_entangled(int detectors, ThresholdMethod method = ThresholdMethod::ClosedForm);

/// Efficiency above which independent entangled pairs beat unentangled
/// singles (0.5 for every even M). `detectors` only matters for bisection.
double threshold_partial_pairs(ThresholdMethod method = ThresholdMethod::ClosedForm, int detectors = 4);

/// Ordered from least to most entangled; ties resolve toward the front.
enum class Strategy { Unentangled, PartialPairs, Entangled };

std::string to_string(Strategy strategy);

/// Per-attempt std of a strategy in units of Delta tau.
double effective_std(Strategy strategy, int detectors, double eta);

struct RegionMap {
    std::vector<int> m_values;
    std::vector<double> eta_grid;
    /// Row-major: cells[i * eta_grid.size() + j] is (m_values[i], eta_grid[j]).
    std::vector<Strategy> cells;

    Strategy at(std::size_t m_index, std::size_t eta_index) const { return cells[m_index * eta_grid.size() + eta_index]; }
};

/// Winner by minimal per-attempt std in every (M, eta) cell. Partial pairs
/// only compete for even M.
RegionMap region_map(std::span<const int> m_values, std::span<const double> eta_grid);

/// For every M, winners never become less entangled as eta increases.
bool is_monotone(const RegionMap &map);

struct CrossoverOptions {
    std::size_t trials_per_point = 1'000'000;
    double tolerance = 0.005;
    double lower = 0.3;
    double upper = 0.99;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    Spectrum spectrum = Spectrum::gaussian(50.0, 1.0);
};

/// Bisects on eta for the point where the Monte Carlo per-attempt spreads of
/// `challenger` and of unentangled singles cross. Both campaigns at one eta
/// share a seed. Returns the midpoint of the final bracket.
double monte_carlo_crossover(Strategy challenger, int detectors, const CrossoverOptions &options = {});

}  // namespace qtoa
