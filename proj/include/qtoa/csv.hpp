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

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "qtoa/estimators.hpp"
#include "qtoa/loss_analysis.hpp"
#include "qtoa/sampler.hpp"

namespace qtoa::csv {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusInsufficient = "insufficient_statistics";

void write_report_header(std::ostream &out);
void write_report_row(std::ostream &out, const AccuracyReport &report, bool bound_ok, double time_scale = 1.0);
/// Row for a campaign that stopped on insufficient statistics; spreads are empty.
void write_failed_row(std::ostream &out, const StateModel &model, double eta, std::size_t trials, std::size_t kept);

void write_fit_header(std::ostream &out);
void write_fit_row(std::ostream &out, const ScalingFit &fit);

/// `M,eta,winner` grid.
void write_region_map(std::ostream &out, const RegionMap &map);

/// `trial,detector,photon,time,retained`, one row per emitted photon.
void write_trial_dump(std::ostream &out, std::span<const TrialRecord> records, double time_scale = 1.0);

}  // namespace qtoa::csv
