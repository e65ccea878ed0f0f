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

#include "qtoa/sampler.hpp"

#include <cmath>

#include "qtoa/errors.hpp"

namespace qtoa {

std::size_t DetectorRecord::detected_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(photons.begin(), photons.end(), [](const Photon &p) { return p.retained; }));
}

std::vector<double> DetectorRecord::arrival_times() const {
    std::vector<double> times;
    times.reserve(photons.size());
    for (const auto &p : photons) {
        if (p.retained) {
            times.push_back(p.time);
        }
    }
    return times;
}

TrialSampler::TrialSampler(StateModel model, SamplerOptions options)
    : model_(std::move(model)),
      options_(options),
      moments_(moments(model_.spectrum)),
      table_(inverse_cdf_table(model_.spectrum, moments_, options_.grid_size)),
      descriptor_(joint_density_kind(model_)) {
    int correlated = 0;
    if (const auto *sum = std::get_if<SumCorrelated>(&descriptor_)) {
        correlated = sum->count() > 1 ? sum->count() : 0;
    } else if (std::holds_alternative<DifferenceCorrelated>(descriptor_) ||
               std::holds_alternative<GroupedSum>(descriptor_)) {
        correlated = 2;
    }
    if (correlated > 0) {
        if (!(options_.offset_window_factor > 0.0) || !std::isfinite(options_.offset_window_factor)) {
            throw ConfigurationError("correlated arrivals need a finite positive acquisition window factor");
        }
        offset_half_width_ = options_.offset_window_factor * moments_.delta_tau * correlated;
    }
    if (const auto *iid = std::get_if<IidDensity>(&descriptor_); iid != nullptr && iid->poisson_counts) {
        const double mean = iid->mean_photons;
        const auto k_max = static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean) + 12.0));
        poisson_cdf_.reserve(static_cast<std::size_t>(k_max) + 1);
        double log_p = -mean;
        double total = 0.0;
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) {
                log_p += std::log(mean) - std::log(static_cast<double>(k));
            }
            total += std::exp(log_p);
            poisson_cdf_.push_back(total);
        }
        poisson_cdf_.back() = 1.0;
    }
}

int TrialSampler::draw_poisson(RngStream &rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(poisson_cdf_.begin(), poisson_cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - poisson_cdf_.begin(),
                                                     static_cast<std::ptrdiff_t>(poisson_cdf_.size()) - 1));
}

void TrialSampler::fill_sum_correlated(std::span<DetectorRecord> detectors, int per_detector, RngStream &rng) const {
    const int count = static_cast<int>(detectors.size()) * per_detector;
    const double average = table_.quantile(rng.uniform()) / count;
    for (auto &d : detectors) {
        d.photons.assign(static_cast<std::size_t>(per_detector), Photon{average, true});
    }
    if (count == 1) {
        return;
    }
    const double a = offset_half_width_;
    double offset_sum = 0.0;
    for (auto &d : detectors) {
        for (auto &p : d.photons) {
            p.time = rng.uniform(-a, a);
            offset_sum += p.time;
        }
    }
    const double shift = average - offset_sum / count;
    for (auto &d : detectors) {
        for (auto &p : d.photons) {
            p.time += shift;
        }
    }
}

void TrialSampler::sample_into(TrialRecord &record, RngStream &rng) const {
    record.model_tag = descriptor_;
    record.lost_any = false;
    std::visit(
        [&](const auto &d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, IidDensity>) {
                record.per_detector.resize(static_cast<std::size_t>(d.detectors));
                for (auto &det : record.per_detector) {
                    det.photons.clear();
                    const int n = d.poisson_counts ? draw_poisson(rng) : 1;
                    for (int k = 0; k < n; ++k) {
                        det.photons.push_back(Photon{table_.quantile(rng.uniform()), true});
                    }
                }
            } else if constexpr (std::is_same_v<D, SumCorrelated>) {
                record.per_detector.resize(static_cast<std::size_t>(d.detectors));
                fill_sum_correlated(record.per_detector, d.photons_per_detector, rng);
            } else if constexpr (std::is_same_v<D, DifferenceCorrelated>) {
                record.per_detector.resize(2);
                const double difference = table_.quantile(rng.uniform());
                const double midpoint = rng.uniform(-offset_half_width_, offset_half_width_);
                record.per_detector[0].photons.assign(1, Photon{midpoint + 0.5 * difference, true});
                record.per_detector[1].photons.assign(1, Photon{midpoint - 0.5 * difference, true});
            } else {
                record.per_detector.resize(static_cast<std::size_t>(d.group_size * d.group_count));
                std::span<DetectorRecord> all(record.per_detector);
                for (int g = 0; g < d.group_count; ++g) {
                    fill_sum_correlated(all.subspan(static_cast<std::size_t>(g * d.group_size),
                                                    static_cast<std::size_t>(d.group_size)),
                                        1, rng);
                }
            }
        },
        descriptor_);
}

TrialRecord TrialSampler::sample(RngStream &rng) const {
    TrialRecord record;
    sample_into(record, rng);
    return record;
}

TrialRecord sample_trial(const TrialSampler &sampler, RngStream &rng) { return sampler.sample(rng); }

void apply_loss(TrialRecord &record, double eta, RngStream &rng) {
    if (std::isnan(eta) || eta < 0.0 || eta > 1.0) {
        throw InvalidArgument("efficiency must lie in [0, 1]");
    }
    for (auto &det : record.per_detector) {
        for (auto &p : det.photons) {
            if (p.retained && !(rng.uniform() < eta)) {
                p.retained = false;
                record.lost_any = true;
            }
        }
    }
}

TrialRecord apply_loss(const TrialRecord &record, double eta, RngStream &rng) {
    TrialRecord copy = record;
    apply_loss(copy, eta, rng);
    return copy;
}

std::vector<TrialRecord> sample_campaign(const TrialSampler &sampler, double eta, std::size_t trials,
                                         std::uint64_t master_seed, unsigned threads) {
    if (trials < 1) {
        throw InvalidArgument("a campaign needs at least one trial");
    }
    return map_campaign(sampler, eta, trials, master_seed, threads,
                        [](std::size_t, const TrialRecord &r) { return r; });
}

}  // namespace qtoa
