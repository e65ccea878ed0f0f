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

#include "qtoa/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qtoa/bounds.hpp"
#include "qtoa/config.hpp"
#include "qtoa/csv.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/estimators.hpp"
#include "qtoa/loss_analysis.hpp"
#include "qtoa/sampler.hpp"

namespace qtoa {
namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> threads;
    bool dump_trials = false;
};

void add_common(CLI::App &sub, Flags &flags) {
    sub.add_option("--config", flags.config, "Scenario file (INI)")->required();
    sub.add_option("--seed", flags.seed, "Master seed, overrides campaign.seed");
    sub.add_option("--out", flags.out, "CSV output path, overrides output.path");
    sub.add_option("--threads", flags.threads, "Worker threads; results do not depend on it");
    sub.add_flag("--dump-trials", flags.dump_trials, "Also write every sampled photon (simulate only)");
}

ScenarioConfig resolve(const Flags &flags) {
    ScenarioConfig config = load_config(flags.config);
    if (flags.seed) {
        config.seed = *flags.seed;
    }
    if (flags.threads) {
        config.threads = *flags.threads;
    }
    if (!flags.out.empty()) {
        config.output_path = flags.out;
    }
    if (flags.dump_trials) {
        config.dump_trials = true;
    }
    return validate(std::move(config));
}

std::string sidecar(const std::string &path, const std::string &suffix) {
    std::filesystem::path p(path);
    p.replace_extension();
    p += suffix;
    return p.string();
}

void emit(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ConfigError("output.path", "cannot write '" + path + "'");
    }
    file << text;
}

StateModel load_model(const ScenarioConfig &config, std::ostream &err) {
    std::vector<std::string> warnings;
    StateModel model = build_model(config, &warnings);
    for (const auto &w : warnings) {
        err << "warning: " << w << '\n';
    }
    return model;
}

// Runs one campaign and appends its CSV row. Returns the report, or nullopt
// after writing a failed row.
std::optional<AccuracyReport> campaign_row(const StateModel &model, const ScenarioConfig &config,
                                           std::uint64_t seed, std::ostream &csv_out, std::ostream &err) {
    const TrialSampler sampler(model, sampler_options(config));
    try {
        AccuracyReport report = run_campaign(sampler, config.eta, config.trials, seed, config.threads);
        csv::write_report_row(csv_out, report, bound_ok(report, energy_profile(model)), config.time_unit);
        return report;
    } catch (const InsufficientStatistics &e) {
        csv::write_failed_row(csv_out, model, config.eta, config.trials, e.kept());
        err << "error: " << model.name() << " M=" << model.detectors() << " N=" << model.photons_per_pulse()
            << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

int cmd_simulate(const Flags &flags, std::ostream &out, std::ostream &err) {
    const ScenarioConfig config = resolve(flags);
    if (config.dump_trials && config.output_path.empty()) {
        throw ConfigError("output.dump_trials", "a trial dump needs --out or output.path");
    }
    const StateModel model = load_model(config, err);
    std::ostringstream text;
    csv::write_report_header(text);
    const auto report = campaign_row(model, config, config.seed, text, err);
    emit(config.output_path, text.str(), out);
    if (!report) {
        return kExitStatisticsError;
    }
    err << "position std: " << csv::format_number(report->empirical_std * config.length_unit) << '\n';
    if (config.dump_trials) {
        const TrialSampler sampler(model, sampler_options(config));
        const auto records = sample_campaign(sampler, config.eta, config.trials, config.seed, config.threads);
        std::ostringstream dump;
        csv::write_trial_dump(dump, records, config.time_unit);
        emit(sidecar(config.output_path, ".trials.csv"), dump.str(), out);
    }
    return kExitOk;
}

std::vector<StateModel> sweep_models(const ScenarioConfig &config, const StateModel &base) {
    std::vector<StateModel> models;
    for (const double v : config.scaling->values) {
        models.push_back(with_axis_value(base, config.scaling->axis, v));
    }
    return models;
}

// Sweep points draw from independent streams.
std::uint64_t point_seed(const ScenarioConfig &config, std::size_t index) {
    return RngStream::derive_seed(config.seed, index);
}

int cmd_scaling(const Flags &flags, std::ostream &out, std::ostream &err) {
    const ScenarioConfig config = resolve(flags);
    if (!config.scaling) {
        throw ConfigError("scaling", "the scaling subcommand needs a [scaling] section");
    }
    const StateModel base = load_model(config, err);
    std::ostringstream text;
    csv::write_report_header(text);
    std::vector<AccuracyReport> reports;
    bool failed = false;
    const auto models = sweep_models(config, base);
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (auto report = campaign_row(models[i], config, point_seed(config, i), text, err)) {
            reports.push_back(std::move(*report));
        } else {
            failed = true;
        }
    }
    if (failed) {
        emit(config.output_path, text.str(), out);
        return kExitStatisticsError;
    }
    std::ostringstream fit_text;
    try {
        csv::write_fit_header(fit_text);
        csv::write_fit_row(fit_text, fit_scaling(reports, config.scaling->axis));
    } catch (const FitError &e) {
        emit(config.output_path, text.str(), out);
        err << "error: " << e.what() << '\n';
        return kExitStatisticsError;
    }
    if (config.output_path.empty()) {
        emit("", text.str() + "\n" + fit_text.str(), out);
    } else {
        emit(config.output_path, text.str(), out);
        emit(sidecar(config.output_path, ".fit.csv"), fit_text.str(), out);
    }
    return kExitOk;
}

int cmd_loss_map(const Flags &flags, std::ostream &out, std::ostream &err) {
    const ScenarioConfig config = resolve(flags);
    const RegionMap map = region_map(config.loss_map.m_values, config.loss_map.eta_values);
    std::ostringstream text;
    csv::write_region_map(text, map);
    emit(config.output_path, text.str(), out);
    if (!is_monotone(map)) {
        err << "warning: region map is not monotone in eta\n";
    }
    return kExitOk;
}

int cmd_bounds_check(const Flags &flags, std::ostream &out, std::ostream &err) {
    const ScenarioConfig config = resolve(flags);
    const StateModel base = load_model(config, err);
    std::vector<StateModel> models{base};
    if (config.scaling) {
        models = sweep_models(config, base);
    }
    std::ostringstream text;
    csv::write_report_header(text);
    std::vector<AccuracyReport> reports;
    bool failed = false;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const std::uint64_t seed = config.scaling ? point_seed(config, i) : config.seed;
        if (auto report = campaign_row(models[i], config, seed, text, err)) {
            reports.push_back(std::move(*report));
        } else {
            failed = true;
        }
    }
    emit(config.output_path, text.str(), out);
    const auto violations = check_reports(reports);
    for (const auto &v : violations) {
        const auto &r = reports[v.index];
        err << "bound violation: " << r.model.name() << " M=" << r.model.detectors()
            << " N=" << r.model.photons_per_pulse() << " std " << csv::format_number(v.empirical_std)
            << " < floor " << csv::format_number(v.floor) << '\n';
    }
    if (failed) {
        return kExitStatisticsError;
    }
    return violations.empty() ? kExitOk : kExitBoundViolation;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Monte Carlo time-of-arrival accuracy for classical and entangled pulses", "qtoa"};
    app.require_subcommand(1);
    Flags flags;
    using Command = std::function<int(const Flags &, std::ostream &, std::ostream &)>;
    const std::vector<std::tuple<std::string, std::string, Command>> commands = {
        {"simulate", "Run one campaign and write its report row", cmd_simulate},
        {"scaling", "Sweep M or N and fit the scaling exponent", cmd_scaling},
        {"loss-map", "Winning strategy over an (M, eta) grid", cmd_loss_map},
        {"bounds-check", "Re-run campaigns and compare against the speed-limit floor", cmd_bounds_check},
    };
    std::vector<std::pair<CLI::App *, Command>> subs;
    for (const auto &[name, help, fn] : commands) {
        CLI::App *sub = app.add_subcommand(name, help);
        add_common(*sub, flags);
        subs.emplace_back(sub, fn);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    try {
        for (const auto &[sub, fn] : subs) {
            if (sub->parsed()) {
                return fn(flags, out, err);
            }
        }
    } catch (const InsufficientStatistics &e) {
        err << "error: " << e.what() << '\n';
        return kExitStatisticsError;
    } catch (const FitError &e) {
        err << "error: " << e.what() << '\n';
        return kExitStatisticsError;
    } catch (const Error &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}

}  // namespace qtoa
