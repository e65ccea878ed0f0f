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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qtoa/bounds.hpp"
#include "qtoa/errors.hpp"

using namespace qtoa;
using std::numbers::pi;

namespace {

const Spectrum kGauss = Spectrum::gaussian(50.0, 1.0);

}  // namespace

TEST_SUITE("bounds") {
    TEST_CASE("speed limit formulas") {
        const EnergyProfile p{50.0, 2.0, EnergyDerivation::Classical};
        CHECK(orthogonality_bound(p) == doctest::Approx(pi / 4.0));
        CHECK(ml_bound(p) == doctest::Approx(2.0 / (pi * 50.0)));
        CHECK(timing_floor(p) == doctest::Approx(0.25));
        // A low-energy narrow-band profile is limited by its mean energy.
        const EnergyProfile low{0.1, 10.0, EnergyDerivation::Classical};
        CHECK(timing_floor(low) == doctest::Approx(2.0 / (pi * 0.1) / pi));
        CHECK_THROWS_AS(orthogonality_bound(EnergyProfile{1.0, 0.0, EnergyDerivation::Classical}), InvalidArgument);
        CHECK_THROWS_AS(ml_bound(EnergyProfile{0.0, 1.0, EnergyDerivation::Classical}), InvalidArgument);
    }

    TEST_CASE("energy profiles of the ensembles") {
        const double e = 50.0;
        const double de = 1.0;
        auto check = [&](StateVariant v, double mean, double spread, EnergyDerivation d) {
            const auto p = energy_profile(StateModel{v, kGauss});
            CHECK(p.mean_energy == doctest::Approx(mean));
            CHECK(p.energy_spread == doctest::Approx(spread).epsilon(1e-9));
            CHECK(p.derivation == d);
        };
        check(ClassicalCoherent{3, 2.0}, 6 * e, std::sqrt(6.0) * de, EnergyDerivation::Classical);
        check(UnentangledSingles{4}, 4 * e, 2.0 * de, EnergyDerivation::Classical);
        check(EntangledSingles{4}, 4 * e, 4.0 * de, EnergyDerivation::Entangled);
        check(FockPulse{3}, 3 * e, 3.0 * de, EnergyDerivation::Squeezed);
        check(EntangledFock{2, 3}, 6 * e, 6.0 * de, EnergyDerivation::EntangledSqueezed);
        check(PartialPairs{8}, 8 * e, 4.0 * de, EnergyDerivation::Classical);
        check(TwinBeam{}, 2 * e, de, EnergyDerivation::Entangled);
        CHECK_THROWS_AS(energy_profile(StateModel{EntangledSingles{2}, Spectrum::gaussian(0.0, 1.0)}), InvalidArgument);
        CHECK_THROWS_AS(energy_profile(StateModel{EntangledSingles{2}, Spectrum::gaussian(-5.0, 1.0)}), InvalidArgument);
    }

    TEST_CASE("gaussian pulses saturate the floor") {
        for (const auto &v : std::vector<StateVariant>{EntangledSingles{4}, UnentangledSingles{4}, FockPulse{2}}) {
            const StateModel m{v, kGauss};
            const auto r = run_campaign(m, 1.0, 50000, 3);
            const double floor = timing_floor(energy_profile(m));
            CHECK(r.empirical_std / floor == doctest::Approx(1.0).epsilon(0.02));
            CHECK(bound_ok(r, energy_profile(m)));
        }
    }

    TEST_CASE("lorentzian pulses sit above the floor") {
        const StateModel m{EntangledSingles{2}, Spectrum::lorentzian(50.0, 1.0)};
        const auto r = run_campaign(m, 1.0, 50000, 3);
        CHECK(r.empirical_std > 1.3 * timing_floor(energy_profile(m)));
        CHECK(check_reports(std::vector<AccuracyReport>{r}).empty());
    }

    TEST_CASE("a sub-bound report is flagged") {
        const StateModel m{EntangledSingles{4}, kGauss};
        AccuracyReport fake{m, 1.0};
        fake.trials_attempted = fake.trials_kept = 100000;
        fake.empirical_std = 0.5 * timing_floor(energy_profile(m));
        fake.std_rel_error = 0.003;
        const std::vector<AccuracyReport> reports = {run_campaign(m, 1.0, 20000, 1), fake};
        const auto violations = check_reports(reports);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].index == 1);
        CHECK(violations[0].floor == doctest::Approx(0.125));
        CHECK(violations[0].empirical_std == doctest::Approx(0.0625));
        const std::vector<EnergyProfile> too_few = {energy_profile(m)};
        CHECK_THROWS_AS(check_reports(reports, too_few), InvalidArgument);
    }

    TEST_CASE("statistical slack around the floor") {
        const StateModel m{EntangledSingles{4}, kGauss};
        const double floor = timing_floor(energy_profile(m));
        AccuracyReport r{m, 1.0};
        r.std_rel_error = 0.01;
        r.empirical_std = floor * 0.98;
        CHECK(bound_ok(r, energy_profile(m)));
        r.empirical_std = floor * 0.96;
        CHECK_FALSE(bound_ok(r, energy_profile(m)));
    }
}
