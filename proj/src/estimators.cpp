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

#include "qtoa/estimators.hpp"

#include <cmath>

#include "qtoa/errors.hpp"

namespace qtoa {
namespace {

bool all_retained(const TrialRecord &record) {
    for (const auto &det : record.per_detector) {
        for (const auto &p : det.photons) {
            if (!p.retained) {
                return false;
            }
        }
    }
    return true;
}

double detector_mean(const DetectorRecord &det, std::size_t &count) {
    double sum = 0.0;
    count = 0;
    for (const auto &p : det.photons) {
        if (p.retained) {
            sum += p.time;
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

// Mean of each intact group's average; counts the intact groups.
double grouped_mean(const TrialRecord &record, const GroupedSum &groups, std::size_t &intact) {
    double sum = 0.0;
    intact = 0;
    for (int g = 0; g < groups.group_count; ++g) {
        double group_sum = 0.0;
        bool ok = true;
        std::size_t photons = 0;
        for (int j = 0; j < groups.group_size && ok; ++j) {
            const auto &det = record.per_detector[static_cast<std::size_t>(g * groups.group_size + j)];
            for (const auto &p : det.photons) {
                ok = ok && p.retained;
                group_sum += p.time;
                ++photons;
            }
        }
        if (ok && photons > 0) {
            sum += group_sum / static_cast<double>(photons);
            ++intact;
        }
    }
    return intact > 0 ? sum / static_cast<double>(intact) : 0.0;
}

}  // namespace

std::optional<double> mean_arrival(const TrialRecord &record) {
    if (const auto *groups = std::get_if<GroupedSum>(&record.model_tag)) {
        std::size_t intact = 0;
        const double mean = grouped_mean(record, *groups, intact);
        return intact > 0 ? std::optional<double>(mean) : std::nullopt;
    }
    if (is_all_or_nothing(record.model_tag) && !all_retained(record)) {
        return std::nullopt;
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto &det : record.per_detector) {
        std::size_t count = 0;
        const double m = detector_mean(det, count);
        if (count > 0) {
            sum += m;
            ++used;
        }
    }
    if (used == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(used);
}

std::optional<double> difference_arrival(const TrialRecord &record) {
    if (record.per_detector.size() != 2) {
        throw InvalidArgument("difference_arrival needs a two-detector record");
    }
    const auto &a = record.per_detector[0].photons;
    const auto &b = record.per_detector[1].photons;
    if (a.empty() || b.empty() || !a.front().retained || !b.front().retained) {
        return std::nullopt;
    }
    return a.front().time - b.front().time;
}

double position_from_time(double t_bar, PulseDirection direction, double light_speed) {
    return static_cast<int>(direction) * light_speed * t_bar;
}

double clock_offset_einstein(double forward_t, double backward_t) { return 0.5 * (forward_t - backward_t); }

double clock_offset_variance(double forward_variance, double backward_variance) {
    return 0.25 * (forward_variance + backward_variance);
}

TrialEstimate trial_estimate(const TrialRecord &record) {
    return std::visit(
        [&](const auto &d) -> TrialEstimate {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, IidDensity>) {
                double sum = 0.0;
                std::size_t count = 0;
                for (const auto &det : record.per_detector) {
                    for (const auto &p : det.photons) {
                        if (p.retained) {
                            sum += p.time;
                            ++count;
                        }
                    }
                }
                if (count == 0) {
                    return {};
                }
                return {sum / static_cast<double>(count), static_cast<double>(count)};
            } else if constexpr (std::is_same_v<D, GroupedSum>) {
                std::size_t intact = 0;
                const double mean = grouped_mean(record, d, intact);
                return {mean, static_cast<double>(intact)};
            } else if constexpr (std::is_same_v<D, DifferenceCorrelated>) {
                const auto diff = difference_arrival(record);
                return diff ? TrialEstimate{*diff, 1.0} : TrialEstimate{};
            } else {
                const auto mean = mean_arrival(record);
                return mean ? TrialEstimate{*mean, 1.0} : TrialEstimate{};
            }
        },
        record.model_tag);
}

AccuracyReport summarize_campaign(const StateModel &model, const TimeMoments &moments, double eta,
                                  std::span<const TrialEstimate> estimates, std::size_t min_kept) {
    const std::size_t trials = estimates.size();
    AccuracyReport report{model, eta};
    report.trials_attempted = trials;
    report.analytic = analytic_accuracy(model, eta, moments);

    double total_weight = 0.0;
    double weighted_sum = 0.0;
    std::size_t kept = 0;
    for (const auto &e : estimates) {
        if (e.weight > 0.0) {
            ++kept;
            total_weight += e.weight;
            weighted_sum += e.weight * e.value;
        }
    }
    report.trials_kept = kept;
    if (kept < std::max<std::size_t>(min_kept, 2)) {
        const double rate = trials > 0 ? static_cast<double>(kept) / static_cast<double>(trials) : 0.0;
        throw InsufficientStatistics("only " + std::to_string(kept) + " of " + std::to_string(trials) +
                                         " trials kept (keep rate " + std::to_string(rate) + ")",
                                     rate, kept);
    }
    const double mean = weighted_sum / total_weight;
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto &e : estimates) {
        if (e.weight > 0.0) {
            const double z2 = e.weight * (e.value - mean) * (e.value - mean);
            m2 += z2;
            m4 += z2 * z2;
        }
    }
    const auto n = static_cast<double>(kept);
    const double unit_variance = m2 / (n - 1.0);

    const auto &tag = joint_density_kind(model);
    double reference_weight = 1.0;
    if (const auto *groups = std::get_if<GroupedSum>(&tag)) {
        reference_weight = groups->group_count;
    } else if (std::holds_alternative<IidDensity>(tag)) {
        reference_weight = total_weight / static_cast<double>(trials);
    }

    report.mean_estimate = mean;
    report.empirical_std = std::sqrt(unit_variance / reference_weight);
    report.empirical_effective_std = std::sqrt(unit_variance * static_cast<double>(trials) / total_weight);
    report.empirical_keep = total_weight / (static_cast<double>(trials) * reference_weight);
    report.ratio = report.empirical_std / report.analytic.delta_t;

    // Relative error of a sample std from the sample kurtosis, plus the
    // fluctuation of the surviving weight for the per-attempt spread.
    const double mean_z2 = m2 / n;
    const double kurtosis = (m4 / n) / (mean_z2 * mean_z2);
    const double variance_rel_var = std::max(0.0, (kurtosis - (n - 3.0) / (n - 1.0)) / n);
    const double std_rel = 0.5 * std::sqrt(variance_rel_var);

    const double mean_w = total_weight / static_cast<double>(trials);
    double weight_var = 0.0;
    for (const auto &e : estimates) {
        weight_var += (e.weight - mean_w) * (e.weight - mean_w);
    }
    weight_var /= static_cast<double>(trials);
    const double weight_rel_var = weight_var / (static_cast<double>(trials) * mean_w * mean_w);
    const bool per_attempt = std::holds_alternative<IidDensity>(tag);
    report.std_rel_error = per_attempt ? std::sqrt(std_rel * std_rel + 0.25 * weight_rel_var) : std_rel;
    report.effective_rel_error = std::sqrt(std_rel * std_rel + 0.25 * weight_rel_var);
    return report;
}

AccuracyReport run_campaign(const TrialSampler &sampler, double eta, std::size_t trials, std::uint64_t seed,
                            unsigned threads, std::size_t min_kept) {
    if (trials < 1000) {
        throw InvalidArgument("accuracy campaigns need at least 1000 trials, got " + std::to_string(trials));
    }
    analytic_accuracy(sampler.model(), eta, sampler.time_moments());
    const auto estimates = map_campaign(sampler, eta, trials, seed, threads,
                                        [](std::size_t, const TrialRecord &r) { return trial_estimate(r); });
    return summarize_campaign(sampler.model(), sampler.time_moments(), eta, estimates, min_kept);
}

AccuracyReport run_campaign(const StateModel &model, double eta, std::size_t trials, std::uint64_t seed,
                            const CampaignOptions &options) {
    const TrialSampler sampler(model, options.sampler);
    return run_campaign(sampler, eta, trials, seed, options.threads, options.min_kept);
}

std::string to_string(ScalingAxis axis) { return axis == ScalingAxis::M ? "M" : "N"; }

double axis_value(const StateModel &model, ScalingAxis axis) {
    return axis == ScalingAxis::M ? model.detectors() : model.photons_per_pulse();
}

StateModel with_axis_value(const StateModel &model, ScalingAxis axis, double value) {
    StateModel out = model;
    const auto as_count = [&]() {
        if (!(value >= 1.0) || value != std::floor(value) || value > 1e6) {
            throw InvalidModelError(to_string(axis) + " must be a positive integer for " + model.name());
        }
        return static_cast<int>(value);
    };
    const bool ok = std::visit(
        [&](auto &m) {
            using V = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<V, ClassicalCoherent>) {
                if (axis == ScalingAxis::M) {
                    m.detectors = as_count();
                } else {
                    m.mean_photons = value;
                }
                return true;
            } else if constexpr (std::is_same_v<V, EntangledFock>) {
                (axis == ScalingAxis::M ? m.detectors : m.photons) = as_count();
                return true;
            } else if constexpr (std::is_same_v<V, FockPulse>) {
                if (axis == ScalingAxis::N) {
                    m.photons = as_count();
                    return true;
                }
                return false;
            } else if constexpr (std::is_same_v<V, TwinBeam>) {
                return false;
            } else {
                if (axis == ScalingAxis::M) {
                    m.detectors = as_count();
                    return true;
                }
                return false;
            }
        },
        out.variant);
    if (!ok) {
        throw InvalidModelError(model.name() + " has no " + to_string(axis) + " axis to sweep");
    }
    out.validate();
    return out;
}

ScalingFit fit_scaling(std::span<const AccuracyReport> reports, ScalingAxis axis) {
    if (reports.size() < 4) {
        throw FitError("scaling fit needs at least 4 reports, got " + std::to_string(reports.size()));
    }
    const auto &first = reports.front();
    const ScalingAxis other = axis == ScalingAxis::M ? ScalingAxis::N : ScalingAxis::M;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &r : reports) {
        if (r.model.kind() != first.model.kind() || r.eta != first.eta ||
            axis_value(r.model, other) != axis_value(first.model, other) || !(r.model.spectrum == first.model.spectrum)) {
            throw FitError("scaling fit reports must differ only along " + to_string(axis));
        }
        const double v = axis_value(r.model, axis);
        if (!(v > 0.0) || !(r.empirical_std > 0.0)) {
            throw FitError("scaling fit needs positive axis values and spreads");
        }
        xs.push_back(std::log(v));
        ys.push_back(std::log(r.empirical_std));
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 1e-12)) {
        throw FitError("scaling fit axis values are degenerate (all equal)");
    }
    ScalingFit fit;
    fit.axis = axis;
    fit.points = xs.size();
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

}  // namespace qtoa
