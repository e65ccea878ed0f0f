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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtoa/sampler.hpp"
#include "qtoa/states.hpp"

namespace qtoa {

/// (1/M) sum_i (1/N_i) sum_k t_ik over retained photons.
///
/// Returns nullopt for a discarded trial: any loss under an all-or-nothing
/// model, or nothing left to average. IID detectors with no retained photon
/// are dropped and M shrinks accordingly; partial-pair trials average the
/// pairs that survived intact.
std::optional<double> mean_arrival(const TrialRecord &record);

/// t1 - t2 for a two-detector record; nullopt when either photon is lost.
std::optional<double> difference_arrival(const TrialRecord &record);

enum class PulseDirection : int { Outbound = 1, Inbound = -1 };

/// x = c * t_bar, signed by the direction the pulse travels. c = 1 unless a
/// unit scale is supplied.
double position_from_time(double t_bar, PulseDirection direction = PulseDirection::Outbound,
                          double light_speed = 1.0);

/// Einstein round-trip synchronization: offset = (forward - backward) / 2.
double clock_offset_einstein(double forward_t, double backward_t);
/// Variance of `clock_offset_einstein` for independent legs.
double clock_offset_variance(double forward_variance, double backward_variance);

/// What one trial contributes to a campaign.
///
/// `weight` is the trial's inverse variance in units of the per-photon
/// (IID), per-pair (grouped) or per-trial (all-or-nothing) variance. Zero
/// weight marks a discarded trial. IID trials use the photon-pooled mean so
/// the weight is simply the number of retained photons.
struct TrialEstimate {
    double value = 0.0;
    double weight = 0.0;
};

TrialEstimate trial_estimate(const TrialRecord &record);

struct CampaignOptions {
    unsigned threads = 1;
    SamplerOptions sampler{};
    std::size_t min_kept = 100;
};

struct AccuracyReport {
    StateModel model;
    double eta = 1.0;
    std::size_t trials_attempted = 0;
    std::size_t trials_kept = 0;
    double mean_estimate = 0.0;
    /// Spread comparable to analytic.delta_t.
    double empirical_std = 0.0;
    /// Spread per attempted trial, comparable to analytic.effective_delta_t.
    double empirical_effective_std = 0.0;
    /// Fraction of the reference weight that survived (pairs for grouped models).
    double empirical_keep = 0.0;
    /// Estimated relative standard error of empirical_std.
    double std_rel_error = 0.0;
    /// Estimated relative standard error of empirical_effective_std.
    double effective_rel_error = 0.0;
    AccuracyPrediction analytic{};
    double ratio = 0.0;
};

/// Campaign statistics from per-trial estimates. Throws InsufficientStatistics
/// when fewer than `min_kept` trials carry weight.
AccuracyReport summarize_campaign(const StateModel &model, const TimeMoments &moments, double eta,
                                  std::span<const TrialEstimate> estimates, std::size_t min_kept = 100);

AccuracyReport run_campaign(const TrialSampler &sampler, double eta, std::size_t trials, std::uint64_t seed,
                            unsigned threads = 1, std::size_t min_kept = 100);
AccuracyReport run_campaign(const StateModel &model, double eta, std::size_t trials, std::uint64_t seed,
                            const CampaignOptions &options = {});

enum class ScalingAxis { M, N };

std::string to_string(ScalingAxis axis);

struct ScalingFit {
    ScalingAxis axis = ScalingAxis::M;
    double exponent = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares of log empirical_std on log axis value.
ScalingFit fit_scaling(std::span<const AccuracyReport> reports, ScalingAxis axis);

/// Copy of `model` with M or N replaced. Throws InvalidModelError when the
/// variant has no such axis.
StateModel with_axis_value(const StateModel &model, ScalingAxis axis, double value);

double axis_value(const StateModel &model, ScalingAxis axis);

}  // namespace qtoa
