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
#include <random>

#include "qtoa/errors.hpp"
#include "qtoa/estimators.hpp"

using namespace qtoa;

namespace {

const Spectrum kGauss = Spectrum::gaussian(50.0, 1.0);

DetectorRecord detector(std::initializer_list<Photon> photons) { return DetectorRecord{photons}; }

AccuracyReport synthetic(const StateModel &model, double std) {
    AccuracyReport r{model, 1.0};
    r.empirical_std = std;
    return r;
}

}  // namespace

TEST_SUITE("estimators") {
    TEST_CASE("mean arrival averages detector means") {
        TrialRecord r;
        r.model_tag = IidDensity{2, 2.0, true};
        r.per_detector = {detector({{1.0}, {3.0}}), detector({{-4.0}})};
        // (1/M) sum_i (1/N_i) sum_k t_ik
        CHECK(*mean_arrival(r) == doctest::Approx(0.5 * (2.0 + -4.0)));
        r.per_detector[1].photons[0].retained = false;
        r.lost_any = true;
        CHECK(*mean_arrival(r) == doctest::Approx(2.0));
        r.per_detector[0].photons[0].retained = false;
        r.per_detector[0].photons[1].retained = false;
        CHECK_FALSE(mean_arrival(r).has_value());
        r.per_detector = {detector({}), detector({{0.25}})};
        CHECK(*mean_arrival(r) == doctest::Approx(0.25));
    }

    TEST_CASE("entangled trials are discarded on any loss") {
        TrialRecord r;
        r.model_tag = SumCorrelated{3, 1};
        r.per_detector = {detector({{0.1}}), detector({{0.2}}), detector({{0.6}})};
        CHECK(*mean_arrival(r) == doctest::Approx(0.3));
        CHECK(trial_estimate(r).weight == 1.0);
        r.per_detector[2].photons[0].retained = false;
        r.lost_any = true;
        CHECK_FALSE(mean_arrival(r).has_value());
        CHECK(trial_estimate(r).weight == 0.0);
    }

    TEST_CASE("partial pairs keep intact pairs") {
        TrialRecord r;
        r.model_tag = GroupedSum{2, 3};
        r.per_detector = {detector({{1.0}}), detector({{3.0}}), detector({{-1.0}}), detector({{-2.0, false}}),
                          detector({{0.0}}), detector({{1.0}})};
        CHECK(*mean_arrival(r) == doctest::Approx(0.5 * (2.0 + 0.5)));
        const auto e = trial_estimate(r);
        CHECK(e.weight == 2.0);
        CHECK(e.value == doctest::Approx(1.25));
        for (auto &d : r.per_detector) {
            d.photons[0].retained = false;
        }
        CHECK_FALSE(mean_arrival(r).has_value());
        CHECK(trial_estimate(r).weight == 0.0);
    }

    TEST_CASE("pooled estimate of independent photons") {
        TrialRecord r;
        r.model_tag = IidDensity{2, 2.0, true};
        r.per_detector = {detector({{1.0}, {3.0}}), detector({{-4.0}})};
        const auto e = trial_estimate(r);
        CHECK(e.weight == 3.0);
        CHECK(e.value == doctest::Approx(0.0));
    }

    TEST_CASE("difference of arrival times") {
        TrialRecord r;
        r.model_tag = DifferenceCorrelated{};
        r.per_detector = {detector({{2.5}}), detector({{1.0}})};
        CHECK(*difference_arrival(r) == doctest::Approx(1.5));
        r.per_detector[1].photons[0].retained = false;
        CHECK_FALSE(difference_arrival(r).has_value());
        r.per_detector.push_back(detector({{0.0}}));
        CHECK_THROWS_AS(difference_arrival(r), InvalidArgument);
    }

    TEST_CASE("position and clock synchronization") {
        CHECK(position_from_time(2.0) == 2.0);
        CHECK(position_from_time(2.0, PulseDirection::Inbound) == -2.0);
        CHECK(position_from_time(2.0, PulseDirection::Outbound, 3e8) == doctest::Approx(6e8));
        CHECK(clock_offset_einstein(5.0, 1.0) == 2.0);
        CHECK(clock_offset_variance(0.04, 0.01) == doctest::Approx(0.0125));

        // Monte Carlo oracle: legs with independent Gaussian timing noise.
        std::mt19937_64 gen(3);
        std::normal_distribution<double> fwd(0.0, 0.2);
        std::normal_distribution<double> bwd(0.0, 0.1);
        const double offset = 0.7;
        const double delay = 4.0;
        double sum = 0.0;
        double sum2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double f = delay + offset + fwd(gen);
            const double b = delay - offset + bwd(gen);
            const double est = clock_offset_einstein(f, b);
            sum += est;
            sum2 += est * est;
        }
        const double mean = sum / n;
        CHECK(mean == doctest::Approx(offset).epsilon(1e-2));
        CHECK(sum2 / n - mean * mean == doctest::Approx(clock_offset_variance(0.04, 0.01)).epsilon(0.02));
    }

    TEST_CASE("campaign statistics from synthetic estimates") {
        const StateModel model{EntangledSingles{2}, kGauss};
        std::vector<TrialEstimate> estimates;
        std::mt19937_64 gen(8);
        std::normal_distribution<double> noise(0.0, 0.3);
        double sum = 0.0;
        double sum2 = 0.0;
        int kept = 0;
        for (int i = 0; i < 5000; ++i) {
            if (i % 4 == 0) {
                estimates.push_back({0.0, 0.0});
                continue;
            }
            const double v = noise(gen);
            estimates.push_back({v, 1.0});
            sum += v;
            sum2 += v * v;
            ++kept;
        }
        const double mean = sum / kept;
        const double sd = std::sqrt((sum2 - kept * mean * mean) / (kept - 1));
        const auto report = summarize_campaign(model, moments(kGauss), 1.0, estimates);
        CHECK(report.trials_attempted == 5000);
        CHECK(report.trials_kept == static_cast<std::size_t>(kept));
        CHECK(report.mean_estimate == doctest::Approx(mean));
        CHECK(report.empirical_std == doctest::Approx(sd).epsilon(1e-10));
        CHECK(report.empirical_keep == doctest::Approx(0.75));
        CHECK(report.empirical_effective_std == doctest::Approx(sd / std::sqrt(0.75)).epsilon(1e-10));
        CHECK(report.ratio == doctest::Approx(sd / 0.25));
        CHECK(report.std_rel_error == doctest::Approx(1.0 / std::sqrt(2.0 * kept)).epsilon(0.15));
    }

    TEST_CASE("too few kept trials") {
        const StateModel model{EntangledSingles{2}, kGauss};
        std::vector<TrialEstimate> estimates(2000, TrialEstimate{0.0, 0.0});
        for (int i = 0; i < 50; ++i) {
            estimates[i] = {0.01 * i, 1.0};
        }
        try {
            summarize_campaign(model, moments(kGauss), 1.0, estimates, 100);
            FAIL("expected InsufficientStatistics");
        } catch (const InsufficientStatistics &e) {
            CHECK(e.kept() == 50);
            CHECK(e.keep_rate() == doctest::Approx(0.025));
        }
        CHECK_NOTHROW(summarize_campaign(model, moments(kGauss), 1.0, estimates, 10));
    }

    TEST_CASE("entangled campaign reaches delta tau over M") {
        const auto report = run_campaign(StateModel{EntangledSingles{4}, kGauss}, 1.0, 100000, 1);
        CHECK(report.trials_kept == 100000);
        CHECK(report.empirical_std == doctest::Approx(0.125).epsilon(0.01));
        CHECK(std::abs(report.ratio - 1.0) < 4.0 * report.std_rel_error);
    }

    TEST_CASE("lossy campaigns match their analytic prediction") {
        const std::vector<std::pair<StateModel, double>> cases = {
            {StateModel{UnentangledSingles{4}, kGauss}, 0.5},    {StateModel{EntangledSingles{3}, kGauss}, 0.8},
            {StateModel{ClassicalCoherent{2, 4.0}, kGauss}, 0.7}, {StateModel{PartialPairs{4}, kGauss}, 0.6},
            {StateModel{TwinBeam{}, kGauss}, 0.9},               {StateModel{FockPulse{2}, kGauss}, 0.9},
        };
        for (const auto &[model, eta] : cases) {
            const auto r = run_campaign(model, eta, 40000, 5);
            INFO(model.name() << " eta " << eta << " ratio " << r.ratio);
            CHECK(std::abs(r.ratio - 1.0) < 4.0 * r.std_rel_error + 0.01);
            const double eff = r.empirical_effective_std / r.analytic.effective_delta_t;
            CHECK(std::abs(eff - 1.0) < 4.0 * r.effective_rel_error + 0.01);
        }
    }

    TEST_CASE("campaigns are independent of the thread count") {
        const StateModel model{ClassicalCoherent{2, 2.0}, kGauss};
        CampaignOptions one;
        CampaignOptions three;
        three.threads = 3;
        const auto a = run_campaign(model, 0.8, 20000, 42, one);
        const auto b = run_campaign(model, 0.8, 20000, 42, three);
        CHECK(a.empirical_std == b.empirical_std);
        CHECK(a.mean_estimate == b.mean_estimate);
        CHECK(a.trials_kept == b.trials_kept);
        const auto c = run_campaign(model, 0.8, 20000, 43, one);
        CHECK(a.empirical_std != c.empirical_std);
    }

    TEST_CASE("campaign preconditions") {
        const StateModel model{EntangledSingles{2}, kGauss};
        CHECK_THROWS_AS(run_campaign(model, 1.0, 999, 1), InvalidArgument);
        CHECK_THROWS_AS(run_campaign(model, 0.0, 1000, 1), DegenerateEfficiencyError);
        CHECK_THROWS_AS(run_campaign(StateModel{EntangledSingles{16}, kGauss}, 0.3, 1000, 1), InsufficientStatistics);
    }

    TEST_CASE("scaling fit recovers a power law") {
        const StateModel base{EntangledSingles{1}, kGauss};
        std::vector<AccuracyReport> reports;
        for (int M : {1, 2, 4, 8, 16}) {
            reports.push_back(synthetic(with_axis_value(base, ScalingAxis::M, M), 0.5 * std::pow(M, -0.75)));
        }
        const auto fit = fit_scaling(reports, ScalingAxis::M);
        CHECK(fit.exponent == doctest::Approx(-0.75));
        CHECK(fit.intercept == doctest::Approx(std::log(0.5)));
        CHECK(fit.slope_stderr < 1e-10);
        CHECK(fit.points == 5);

        // Oracle: closed-form OLS slope on noisy points.
        const std::vector<double> noisy = {0.51, 0.24, 0.13, 0.061};
        std::vector<AccuracyReport> rs;
        double mx = 0, my = 0;
        for (int i = 0; i < 4; ++i) {
            rs.push_back(synthetic(with_axis_value(base, ScalingAxis::M, 1 << i), noisy[i]));
            mx += std::log(1 << i) / 4;
            my += std::log(noisy[i]) / 4;
        }
        double sxx = 0, sxy = 0;
        for (int i = 0; i < 4; ++i) {
            sxx += std::pow(std::log(1 << i) - mx, 2);
            sxy += (std::log(1 << i) - mx) * (std::log(noisy[i]) - my);
        }
        CHECK(fit_scaling(rs, ScalingAxis::M).exponent == doctest::Approx(sxy / sxx));
        CHECK(fit_scaling(rs, ScalingAxis::M).slope_stderr > 0.0);
    }

    TEST_CASE("scaling fit errors") {
        const StateModel base{EntangledSingles{1}, kGauss};
        std::vector<AccuracyReport> reports;
        for (int M : {1, 2, 4}) {
            reports.push_back(synthetic(with_axis_value(base, ScalingAxis::M, M), 0.5 / M));
        }
        CHECK_THROWS_AS(fit_scaling(reports, ScalingAxis::M), FitError);
        reports.push_back(synthetic(StateModel{UnentangledSingles{8}, kGauss}, 0.1));
        CHECK_THROWS_AS(fit_scaling(reports, ScalingAxis::M), FitError);
        std::vector<AccuracyReport> same(4, synthetic(base, 0.5));
        CHECK_THROWS_AS(fit_scaling(same, ScalingAxis::M), FitError);
    }

    TEST_CASE("axis sweeps") {
        const StateModel cc{ClassicalCoherent{2, 1.0}, kGauss};
        CHECK(axis_value(with_axis_value(cc, ScalingAxis::N, 2.5), ScalingAxis::N) == 2.5);
        CHECK(axis_value(with_axis_value(cc, ScalingAxis::M, 4), ScalingAxis::M) == 4);
        CHECK_THROWS_AS(with_axis_value(cc, ScalingAxis::M, 2.5), InvalidModelError);
        CHECK_THROWS_AS(with_axis_value(StateModel{FockPulse{2}, kGauss}, ScalingAxis::M, 2), InvalidModelError);
        CHECK_THROWS_AS(with_axis_value(StateModel{TwinBeam{}, kGauss}, ScalingAxis::M, 2), InvalidModelError);
        CHECK_THROWS_AS(with_axis_value(StateModel{EntangledSingles{2}, kGauss}, ScalingAxis::N, 2), InvalidModelError);
        CHECK_THROWS_AS(with_axis_value(StateModel{PartialPairs{2}, kGauss}, ScalingAxis::M, 3), InvalidModelError);
        CHECK(with_axis_value(StateModel{FockPulse{2}, kGauss}, ScalingAxis::N, 8).photons_per_pulse() == 8);
    }
}
