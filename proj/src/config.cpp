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

#include "qtoa/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qtoa/csv.hpp"
#include "qtoa/errors.hpp"

namespace qtoa {
namespace {

using Section = std::map<std::string, std::string>;
using RawConfig = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>> &schema() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"spectrum", {"kind", "center", "width", "table"}},
        {"model", {"variant", "M", "N"}},
        {"campaign", {"eta", "trials", "seed", "threads"}},
        {"scaling", {"axis", "values"}},
        {"loss_map", {"m_values", "eta_values", "eta_steps"}},
        {"sampler", {"grid_size", "window_factor"}},
        {"units", {"time", "length"}},
        {"output", {"path", "dump_trials"}},
    };
    return keys;
}

RawConfig read_raw(std::istream &in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        std::ostringstream msg;
        msg << "line " << e.line() << ": " << e.message();
        throw ConfigError("", msg.str());
    }
    RawConfig raw;
    for (const auto &[section, body] : tree) {
        const auto known = schema().find(section);
        if (body.empty()) {
            throw ConfigError(section, "key outside of any [section]");
        }
        if (known == schema().end()) {
            throw ConfigError(section, "unknown section");
        }
        for (const auto &[key, value] : body) {
            if (!known->second.contains(key)) {
                throw ConfigError(section + "." + key, "unknown key");
            }
            raw[section][key] = value.get_value<std::string>();
        }
    }
    return raw;
}

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

int parse_int(const std::string &key, const std::string &text) {
    const std::uint64_t value = parse_unsigned(key, text);
    if (value > 1'000'000) {
        throw ConfigError(key, "value " + text + " is out of range");
    }
    return static_cast<int>(value);
}

bool parse_bool(const std::string &key, const std::string &text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string &key, const std::string &text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError(key, "empty list entry");
        }
        items.push_back(item);
    }
    if (items.empty()) {
        throw ConfigError(key, "list is empty");
    }
    return items;
}

// Integers and inclusive `lo:hi` ranges.
std::vector<int> parse_int_list(const std::string &key, const std::string &text) {
    std::vector<int> values;
    for (const auto &item : split_list(key, text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            values.push_back(parse_int(key, item));
            continue;
        }
        const int lo = parse_int(key, item.substr(0, colon));
        const int hi = parse_int(key, item.substr(colon + 1));
        if (hi < lo || hi - lo > 10'000) {
            throw ConfigError(key, "bad range '" + item + "'");
        }
        for (int v = lo; v <= hi; ++v) {
            values.push_back(v);
        }
    }
    return values;
}

std::vector<double> parse_double_list(const std::string &key, const std::string &text) {
    std::vector<double> values;
    for (const auto &item : split_list(key, text)) {
        values.push_back(parse_double(key, item));
    }
    return values;
}

template <class T>
std::string join(const std::vector<T> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += csv::format_number(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

std::optional<SpectrumKind> spectrum_kind_from_string(const std::string &name) {
    for (const auto kind : {SpectrumKind::Gaussian, SpectrumKind::Lorentzian, SpectrumKind::Tabulated}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

int default_detectors(ModelKind kind) {
    return (kind == ModelKind::TwinBeam || kind == ModelKind::PartialPairs) ? 2 : 1;
}

void validate_model(const ScenarioConfig::ModelBlock &m) {
    const int M = m.detectors;
    const double N = m.photons;
    if (M < 1) {
        throw ConfigError("model.M", "must be >= 1");
    }
    if (!(N >= 1.0)) {
        throw ConfigError("model.N", "must be >= 1");
    }
    const bool integral_n = N == std::floor(N);
    switch (m.variant) {
        case ModelKind::ClassicalCoherent:
            break;
        case ModelKind::FockPulse:
            if (M != 1) {
                throw ConfigError("model.M", "fock_pulse is a single pulse; M must be 1");
            }
            [[fallthrough]];
        case ModelKind::EntangledFock:
            if (!integral_n) {
                throw ConfigError("model.N", "Fock states need an integer photon number");
            }
            break;
        case ModelKind::PartialPairs:
            if (M < 2 || M % 2 != 0) {
                throw ConfigError("model.M", "partial_pairs needs an even M >= 2 (parity), got " + std::to_string(M));
            }
            [[fallthrough]];
        case ModelKind::UnentangledSingles:
        case ModelKind::EntangledSingles:
            if (N != 1.0) {
                throw ConfigError("model.N", to_string(m.variant) + " carries one photon per pulse; N must be 1");
            }
            break;
        case ModelKind::TwinBeam:
            if (M != 2) {
                throw ConfigError("model.M", "twin_beam always has M = 2");
            }
            if (N != 1.0) {
                throw ConfigError("model.N", "twin_beam carries one photon per arm; N must be 1");
            }
            break;
    }
}

}  // namespace

ScenarioConfig validate(ScenarioConfig c) {
    auto &s = c.spectrum;
    if (!(s.center > 0.0) || !std::isfinite(s.center)) {
        throw ConfigError("spectrum.center", "must be > 0 (energies are measured from a zero ground state)");
    }
    if (s.kind == SpectrumKind::Tabulated) {
        if (s.table.empty()) {
            throw ConfigError("spectrum.table", "required when kind = tabulated");
        }
        if (!std::filesystem::exists(s.table)) {
            throw ConfigError("spectrum.table", "file '" + s.table + "' does not exist");
        }
    } else {
        if (!(s.width > 0.0) || !std::isfinite(s.width)) {
            throw ConfigError("spectrum.width", "must be > 0");
        }
        if (!s.table.empty()) {
            throw ConfigError("spectrum.table", "only valid when kind = tabulated");
        }
    }

    validate_model(c.model);

    if (!(c.eta > 0.0 && c.eta <= 1.0)) {
        throw ConfigError("campaign.eta", "efficiency must lie in (0, 1], got " + csv::format_number(c.eta));
    }
    if (c.trials < 1000) {
        throw ConfigError("campaign.trials", "need at least 1000 trials to estimate a spread");
    }
    if (c.trials > 100'000'000) {
        throw ConfigError("campaign.trials", "more than 1e8 trials is not supported");
    }
    if (c.threads < 1 || c.threads > 1024) {
        throw ConfigError("campaign.threads", "must lie in [1, 1024]");
    }

    if (c.scaling) {
        auto &sc = *c.scaling;
        if (sc.values.empty()) {
            throw ConfigError("scaling.values", "list is empty");
        }
        if (sc.values.size() < 4) {
            throw ConfigError("scaling.values", "a scaling fit needs at least 4 values");
        }
        std::set<double> distinct(sc.values.begin(), sc.values.end());
        if (distinct.size() < 2) {
            throw ConfigError("scaling.values", "values are all equal");
        }
        for (const double v : sc.values) {
            ScenarioConfig::ModelBlock m = c.model;
            if (sc.axis == ScalingAxis::M) {
                if (v != std::floor(v) || v < 1.0 || v > 1e6) {
                    throw ConfigError("scaling.values", "M values must be positive integers");
                }
                m.detectors = static_cast<int>(v);
            } else {
                m.photons = v;
            }
            try {
                validate_model(m);
            } catch (const ConfigError &e) {
                throw ConfigError("scaling.values", std::string("sweep value ") + csv::format_number(v) +
                                                        " is invalid (" + e.what() + ")");
            }
            const bool m_fixed = c.model.variant == ModelKind::FockPulse || c.model.variant == ModelKind::TwinBeam;
            const bool n_fixed = c.model.variant == ModelKind::UnentangledSingles ||
                                 c.model.variant == ModelKind::EntangledSingles ||
                                 c.model.variant == ModelKind::PartialPairs || c.model.variant == ModelKind::TwinBeam;
            if ((sc.axis == ScalingAxis::M && m_fixed) || (sc.axis == ScalingAxis::N && n_fixed)) {
                throw ConfigError("scaling.axis", to_string(c.model.variant) + " has no " + to_string(sc.axis) +
                                                      " axis to sweep");
            }
        }
    }

    auto &lm = c.loss_map;
    if (lm.m_values.empty()) {
        for (int m = 2; m <= 16; ++m) {
            lm.m_values.push_back(m);
        }
    }
    if (lm.eta_values.empty()) {
        for (int k = 1; k <= 100; ++k) {
            lm.eta_values.push_back(k / 100.0);
        }
    }
    for (const int m : lm.m_values) {
        if (m < 1) {
            throw ConfigError("loss_map.m_values", "M values must be >= 1");
        }
    }
    for (const double eta : lm.eta_values) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw ConfigError("loss_map.eta_values", "efficiencies must lie in (0, 1]");
        }
    }

    if (c.grid_size < InverseCdfTable::kMinGridSize) {
        throw ConfigError("sampler.grid_size", "must be >= 1024");
    }
    if (!(c.window_factor > 0.0)) {
        throw ConfigError("sampler.window_factor", "must be > 0");
    }
    if (!(c.time_unit > 0.0)) {
        throw ConfigError("units.time", "must be > 0");
    }
    if (!(c.length_unit > 0.0)) {
        throw ConfigError("units.length", "must be > 0");
    }
    return c;
}

ScenarioConfig parse_config(std::istream &in) {
    const RawConfig raw = read_raw(in);
    auto get = [&](const std::string &section, const std::string &key) -> std::optional<std::string> {
        const auto s = raw.find(section);
        if (s == raw.end()) {
            return std::nullopt;
        }
        const auto k = s->second.find(key);
        if (k == s->second.end()) {
            return std::nullopt;
        }
        return trim(k->second);
    };

    ScenarioConfig c;
    if (auto v = get("spectrum", "kind")) {
        const auto kind = spectrum_kind_from_string(*v);
        if (!kind) {
            throw ConfigError("spectrum.kind", "unknown spectrum kind '" + *v + "'");
        }
        c.spectrum.kind = *kind;
    }
    if (auto v = get("spectrum", "center")) c.spectrum.center = parse_double("spectrum.center", *v);
    if (auto v = get("spectrum", "width")) c.spectrum.width = parse_double("spectrum.width", *v);
    if (auto v = get("spectrum", "table")) c.spectrum.table = *v;

    const auto variant = get("model", "variant");
    if (!variant) {
        throw ConfigError("model.variant", "required");
    }
    const auto kind = model_kind_from_string(*variant);
    if (!kind) {
        throw ConfigError("model.variant", "unknown model '" + *variant + "'");
    }
    c.model.variant = *kind;
    c.model.detectors = default_detectors(*kind);
    if (auto v = get("model", "M")) c.model.detectors = parse_int("model.M", *v);
    if (auto v = get("model", "N")) c.model.photons = parse_double("model.N", *v);

    if (auto v = get("campaign", "eta")) c.eta = parse_double("campaign.eta", *v);
    if (auto v = get("campaign", "trials")) c.trials = parse_unsigned("campaign.trials", *v);
    if (auto v = get("campaign", "seed")) c.seed = parse_unsigned("campaign.seed", *v);
    if (auto v = get("campaign", "threads")) c.threads = static_cast<unsigned>(parse_int("campaign.threads", *v));

    if (raw.contains("scaling")) {
        ScenarioConfig::ScalingBlock sc;
        if (auto v = get("scaling", "axis")) {
            if (*v == "M") {
                sc.axis = ScalingAxis::M;
            } else if (*v == "N") {
                sc.axis = ScalingAxis::N;
            } else {
                throw ConfigError("scaling.axis", "must be M or N, got '" + *v + "'");
            }
        }
        const auto values = get("scaling", "values");
        if (!values || values->empty()) {
            throw ConfigError("scaling.values", "list is empty");
        }
        sc.values = parse_double_list("scaling.values", *values);
        c.scaling = sc;
    }

    if (auto v = get("loss_map", "m_values")) c.loss_map.m_values = parse_int_list("loss_map.m_values", *v);
    const auto eta_values = get("loss_map", "eta_values");
    const auto eta_steps = get("loss_map", "eta_steps");
    if (eta_values && eta_steps) {
        throw ConfigError("loss_map.eta_steps", "give either eta_values or eta_steps, not both");
    }
    if (eta_values) {
        c.loss_map.eta_values = parse_double_list("loss_map.eta_values", *eta_values);
    }
    if (eta_steps) {
        const int steps = parse_int("loss_map.eta_steps", *eta_steps);
        if (steps < 1) {
            throw ConfigError("loss_map.eta_steps", "must be >= 1");
        }
        for (int k = 1; k <= steps; ++k) {
            c.loss_map.eta_values.push_back(static_cast<double>(k) / steps);
        }
    }

    if (auto v = get("sampler", "grid_size")) c.grid_size = parse_unsigned("sampler.grid_size", *v);
    if (auto v = get("sampler", "window_factor")) c.window_factor = parse_double("sampler.window_factor", *v);
    if (auto v = get("units", "time")) c.time_unit = parse_double("units.time", *v);
    if (auto v = get("units", "length")) c.length_unit = parse_double("units.length", *v);
    if (auto v = get("output", "path")) c.output_path = *v;
    if (auto v = get("output", "dump_trials")) c.dump_trials = parse_bool("output.dump_trials", *v);
    return validate(std::move(c));
}

ScenarioConfig parse_config_text(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in);
}

ScenarioConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    // Relative table paths are resolved against the config file's directory.
    std::string text = buffer.str();
    std::istringstream first_pass(text);
    const RawConfig raw = read_raw(first_pass);
    if (const auto s = raw.find("spectrum"); s != raw.end()) {
        if (const auto t = s->second.find("table"); t != s->second.end()) {
            const std::filesystem::path table(trim(t->second));
            if (table.is_relative()) {
                const auto resolved = (std::filesystem::path(path).parent_path() / table).lexically_normal();
                boost::property_tree::ptree tree;
                std::istringstream again(text);
                boost::property_tree::read_ini(again, tree);
                tree.put("spectrum.table", resolved.string());
                std::ostringstream rewritten;
                boost::property_tree::write_ini(rewritten, tree);
                text = rewritten.str();
            }
        }
    }
    return parse_config_text(text);
}

std::string serialize(const ScenarioConfig &c) {
    using csv::format_number;
    std::ostringstream out;
    out << "[spectrum]\n";
    out << "kind = " << to_string(c.spectrum.kind) << '\n';
    out << "center = " << format_number(c.spectrum.center) << '\n';
    out << "width = " << format_number(c.spectrum.width) << '\n';
    if (!c.spectrum.table.empty()) {
        out << "table = " << c.spectrum.table << '\n';
    }
    out << "\n[model]\n";
    out << "variant = " << to_string(c.model.variant) << '\n';
    out << "M = " << c.model.detectors << '\n';
    out << "N = " << format_number(c.model.photons) << '\n';
    out << "\n[campaign]\n";
    out << "eta = " << format_number(c.eta) << '\n';
    out << "trials = " << c.trials << '\n';
    out << "seed = " << c.seed << '\n';
    out << "threads = " << c.threads << '\n';
    if (c.scaling) {
        out << "\n[scaling]\n";
        out << "axis = " << to_string(c.scaling->axis) << '\n';
        out << "values = " << join(c.scaling->values) << '\n';
    }
    out << "\n[loss_map]\n";
    out << "m_values = " << join(c.loss_map.m_values) << '\n';
    out << "eta_values = " << join(c.loss_map.eta_values) << '\n';
    out << "\n[sampler]\n";
    out << "grid_size = " << c.grid_size << '\n';
    out << "window_factor = " << format_number(c.window_factor) << '\n';
    out << "\n[units]\n";
    out << "time = " << format_number(c.time_unit) << '\n';
    out << "length = " << format_number(c.length_unit) << '\n';
    out << "\n[output]\n";
    if (!c.output_path.empty()) {
        out << "path = " << c.output_path << '\n';
    }
    out << "dump_trials = " << (c.dump_trials ? "true" : "false") << '\n';
    return out.str();
}

StateModel build_model(const ScenarioConfig &c, std::vector<std::string> *warnings) {
    Spectrum spectrum = Spectrum::gaussian(c.spectrum.center, c.spectrum.width);
    switch (c.spectrum.kind) {
        case SpectrumKind::Gaussian:
            break;
        case SpectrumKind::Lorentzian:
            spectrum = Spectrum::lorentzian(c.spectrum.center, c.spectrum.width);
            break;
        case SpectrumKind::Tabulated: {
            auto loaded = load_tabulated_csv(c.spectrum.table);
            if (warnings != nullptr) {
                warnings->insert(warnings->end(), loaded.warnings.begin(), loaded.warnings.end());
            }
            spectrum = loaded.spectrum;
            break;
        }
    }
    const int M = c.model.detectors;
    const double N = c.model.photons;
    const int n = static_cast<int>(N);
    StateVariant variant;
    switch (c.model.variant) {
        case ModelKind::ClassicalCoherent:
            variant = ClassicalCoherent{M, N};
            break;
        case ModelKind::UnentangledSingles:
            variant = UnentangledSingles{M};
            break;
        case ModelKind::EntangledSingles:
            variant = EntangledSingles{M};
            break;
        case ModelKind::FockPulse:
            variant = FockPulse{n};
            break;
        case ModelKind::EntangledFock:
            variant = EntangledFock{M, n};
            break;
        case ModelKind::PartialPairs:
            variant = PartialPairs{M};
            break;
        case ModelKind::TwinBeam:
            variant = TwinBeam{};
            break;
    }
    StateModel model{variant, spectrum};
    model.validate();
    return model;
}

SamplerOptions sampler_options(const ScenarioConfig &c) {
    SamplerOptions options;
    options.grid_size = c.grid_size;
    options.offset_window_factor = c.window_factor;
    return options;
}

}  // namespace qtoa
