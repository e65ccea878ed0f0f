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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

#include "qtoa/rng.hpp"
#include "qtoa/spectra.hpp"
#include "qtoa/states.hpp"

namespace qtoa {

struct Photon {
    double time;
    bool retained = true;
};

struct DetectorRecord {
    /// Every emitted photon, lost ones included (retained == false).
    std::vector<Photon> photons;

    std::size_t detected_count() const noexcept;
    std::vector<double> arrival_times() const;
};

struct TrialRecord {
    std::vector<DetectorRecord> per_detector;
    bool lost_any = false;
    DensityDescriptor model_tag = IidDensity{0, 0.0, false};
};

struct SamplerOptions {
    std::size_t grid_size = kDefaultGridSize;
    /// Half-width of the acquisition window for correlated arrivals, in units
    /// of Delta tau times the number of correlated photons.
    double offset_window_factor = 10.0;
};

/// Draws trials for one StateModel.
///
/// Sum-correlated arrivals: the trial average is sampled exactly from
/// |g(K tbar)|^2; individual times are tbar plus zero-mean uniform offsets on
/// the acquisition window. Only the average carries timing information, so
/// the individual marginals are an artifact of the finite window.
class TrialSampler {
   public:
    explicit TrialSampler(StateModel model, SamplerOptions options = {});

    TrialRecord sample(RngStream &rng) const;
    /// Same draws as `sample`, reusing the record's storage.
    void sample_into(TrialRecord &record, RngStream &rng) const;

    const StateModel &model() const noexcept { return model_; }
    const TimeMoments &time_moments() const noexcept { return moments_; }
    const InverseCdfTable &table() const noexcept { return table_; }
    const DensityDescriptor &descriptor() const noexcept { return descriptor_; }
    /// Half-width of the uniform offset window (0 for IID models).
    double offset_half_width() const noexcept { return offset_half_width_; }

   private:
    int draw_poisson(RngStream &rng) const;
    void fill_sum_correlated(std::span<DetectorRecord> detectors, int per_detector, RngStream &rng) const;

    StateModel model_;
    SamplerOptions options_;
    TimeMoments moments_;
    InverseCdfTable table_;
    DensityDescriptor descriptor_;
    double offset_half_width_ = 0.0;
    std::vector<double> poisson_cdf_;
};

TrialRecord sample_trial(const TrialSampler &sampler, RngStream &rng);

/// Each retained photon survives independently with probability eta.
void apply_loss(TrialRecord &record, double eta, RngStream &rng);
TrialRecord apply_loss(const TrialRecord &record, double eta, RngStream &rng);

/// Runs `fn(trial_index, record)` for every trial of a campaign and returns
/// the results in trial order. Trial k is sampled and passed through the loss
/// channel with RngStream(master_seed, k), so the output does not depend on
/// `threads`.
template <class Fn>
auto map_campaign(const TrialSampler &sampler, double eta, std::size_t trials, std::uint64_t master_seed,
                  unsigned threads, Fn &&fn) {
    using Result = std::invoke_result_t<Fn &, std::size_t, const TrialRecord &>;
    std::vector<Result> results(trials);
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
    std::vector<std::exception_ptr> failures(workers);

    auto run = [&](unsigned worker) {
        try {
            TrialRecord record;
            const std::size_t begin = trials * worker / workers;
            const std::size_t end = trials * (worker + 1) / workers;
            for (std::size_t k = begin; k < end; ++k) {
                RngStream rng(master_seed, k);
                sampler.sample_into(record, rng);
                apply_loss(record, eta, rng);
                results[k] = fn(k, static_cast<const TrialRecord &>(record));
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
    }
    for (auto &failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    return results;
}

std::vector<TrialRecord> sample_campaign(const TrialSampler &sampler, double eta, std::size_t trials,
                                         std::uint64_t master_seed, unsigned threads = 1);

}  // namespace qtoa
