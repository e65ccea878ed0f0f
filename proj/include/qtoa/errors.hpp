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

#include <stdexcept>
#include <string>

namespace qtoa {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value is outside an operation's domain.
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// A tabulated spectrum is too coarse for the time window it must cover.
class ResolutionError : public Error {
   public:
    using Error::Error;
};

/// A time moment of |g(t)|^2 did not converge as the window grew.
class DivergentMomentError : public Error {
   public:
    using Error::Error;
};

/// The numeric CDF behind an inverse-CDF table is not monotone or not finite.
class TableConstructionError : public Error {
   public:
    using Error::Error;
};

/// Efficiency of zero leaves nothing to detect.
class DegenerateEfficiencyError : public Error {
   public:
    using Error::Error;
};

/// A StateModel violates its structural invariants (counts, parity).
class InvalidModelError : public Error {
   public:
    using Error::Error;
};

/// The sampler is missing configuration it needs (offset window).
class ConfigurationError : public Error {
   public:
    using Error::Error;
};

/// Too few trials survived the discard policy to estimate a spread.
class InsufficientStatistics : public Error {
   public:
    InsufficientStatistics(const std::string &what, double keep_rate, std::size_t kept)
        : Error(what), keep_rate_(keep_rate), kept_(kept) {}

    double keep_rate() const noexcept { return keep_rate_; }
    std::size_t kept() const noexcept { return kept_; }

   private:
    double keep_rate_;
    std::size_t kept_;
};

/// Scaling fit impossible (too few points, degenerate axis, mixed models).
class FitError : public Error {
   public:
    using Error::Error;
};

/// Crossover threshold does not exist (M = 1: strategies coincide).
class UndefinedThresholdError : public Error {
   public:
    using Error::Error;
};

/// Scenario configuration failed validation. `key()` names the offending field.
class ConfigError : public Error {
   public:
    ConfigError(std::string key, const std::string &message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string &key() const noexcept { return key_; }

   private:
    std::string key_;
};

}  // namespace qtoa
