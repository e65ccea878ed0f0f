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
#include <limits>

namespace qtoa {

/// Counter-addressed random stream: one stream per (master seed, trial
/// ordinal). Seeding goes through SplitMix64 and drives a xoshiro256**
/// generator, so constructing a stream is a handful of integer ops and
/// campaigns can reseed per trial without cost.
///
/// All draws are produced from raw 64-bit outputs with fixed arithmetic;
/// no std distributions are used, so sequences are identical across
/// standard library implementations.
class RngStream {
   public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index) {
        std::uint64_t x = mix(master_seed) ^ mix(stream_index + 0x632be59bd9b4e019ULL);
        for (auto &word : state_) {
            word = splitmix_next(x);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Seed for the `index`-th sub-campaign derived from `master_seed`.
    static constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
        return mix(mix(master_seed + 0x2545f4914f6cdd1dULL) ^ mix(index + 0xd1342543de82ef95ULL));
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

   private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t splitmix_next(std::uint64_t &x) {
        x += 0x9e3779b97f4a7c15ULL;
        return mix(x);
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_[4]{};
};

}  // namespace qtoa
