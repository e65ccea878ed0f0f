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
#include <numbers>

#include "../oracles.hpp"
#include "qtoa/config.hpp"
#include "qtoa/errors.hpp"

using namespace qtoa;

namespace {

std::string key_of(const std::string &text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError &e) {
        return e.key();
    }
    return "<accepted>";
}

std::string gaussian_table_csv() {
    std::string text = "omega,power\n";
    for (int i = -240; i <= 240; ++i) {
        const double w = 50.0 + i * 0.05;
        const double d = w - 50.0;
        text += std::to_string(w) + "," + std::to_string(std::exp(-0.5 * d * d) / std::sqrt(2 * std::numbers::pi)) + "\n";
    }
    return text;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("minimal config gets defaults") {
        const auto c = parse_config_text("[model]\nvariant = entangled_singles\n");
        CHECK(c.spectrum.kind == SpectrumKind::Gaussian);
        CHECK(c.spectrum.center == 50.0);
        CHECK(c.spectrum.width == 1.0);
        CHECK(c.model.variant == ModelKind::EntangledSingles);
        CHECK(c.model.detectors == 1);
        CHECK(c.eta == 1.0);
        CHECK(c.trials == 100000);
        CHECK(c.seed == 1);
        CHECK(c.threads == 1);
        CHECK(c.grid_size == kDefaultGridSize);
        CHECK(c.window_factor == 10.0);
        CHECK_FALSE(c.scaling.has_value());
        CHECK(c.loss_map.m_values.size() == 15);
        CHECK(c.loss_map.m_values.front() == 2);
        CHECK(c.loss_map.eta_values.size() == 100);
        CHECK(c.loss_map.eta_values.back() == 1.0);
        CHECK(c == validate(c));
    }

    TEST_CASE("variant defaults for M") {
        CHECK(parse_config_text("[model]\nvariant = twin_beam\n").model.detectors == 2);
        CHECK(parse_config_text("[model]\nvariant = partial_pairs\n").model.detectors == 2);
    }

    TEST_CASE("validation errors name the field") {
        const std::string model = "[model]\nvariant = entangled_singles\n";
        CHECK(key_of(model + "[campaign]\neta = 1.2\n") == "campaign.eta");
        CHECK(key_of(model + "[campaign]\neta = 0\n") == "campaign.eta");
        CHECK(key_of(model + "[campaign]\ntrials = \n") == "campaign.trials");
        CHECK(key_of(model + "[campaign]\ntrials = 500\n") == "campaign.trials");
        CHECK(key_of(model + "[campaign]\ntrials = 1e5\n") == "campaign.trials");
        CHECK(key_of(model + "[campaign]\nseed = -3\n") == "campaign.seed");
        CHECK(key_of(model + "[campaign]\nthreads = 0\n") == "campaign.threads");
        CHECK(key_of(model + "[campaign]\ntrails = 5000\n") == "campaign.trails");
        CHECK(key_of(model + "[spectrum]\nwidth = -1\n") == "spectrum.width");
        CHECK(key_of(model + "[spectrum]\ncenter = 0\n") == "spectrum.center");
        CHECK(key_of(model + "[spectrum]\nkind = rectangular\n") == "spectrum.kind");
        CHECK(key_of(model + "[spectrum]\nkind = tabulated\n") == "spectrum.table");
        CHECK(key_of(model + "[spectrum]\nkind = tabulated\ntable = /nonexistent/x.csv\n") == "spectrum.table");
        CHECK(key_of(model + "[sampler]\ngrid_size = 512\n") == "sampler.grid_size");
        CHECK(key_of(model + "[sampler]\nwindow_factor = 0\n") == "sampler.window_factor");
        CHECK(key_of(model + "[units]\ntime = -1\n") == "units.time");
        CHECK(key_of(model + "[output]\ndump_trials = maybe\n") == "output.dump_trials");
        CHECK(key_of(model + "[extra]\nx = 1\n") == "extra");
        CHECK(key_of("[model]\nvariant = noon\n") == "model.variant");
        CHECK(key_of("[campaign]\neta = 0.5\n") == "model.variant");
        CHECK(key_of("[model]\nvariant = partial_pairs\nM = 3\n") == "model.M");
        CHECK(key_of("[model]\nvariant = twin_beam\nM = 3\n") == "model.M");
        CHECK(key_of("[model]\nvariant = fock_pulse\nM = 2\nN = 3\n") == "model.M");
        CHECK(key_of("[model]\nvariant = fock_pulse\nN = 2.5\n") == "model.N");
        CHECK(key_of("[model]\nvariant = entangled_singles\nN = 2\n") == "model.N");
        CHECK(key_of("[model]\nvariant = classical_coherent\nN = 2.5\n") == "<accepted>");
        CHECK(key_of("[model]\nvariant = classical_coherent\nN = 0.5\n") == "model.N");
    }

    TEST_CASE("parity error message") {
        try {
            parse_config_text("[model]\nvariant = partial_pairs\nM = 3\n");
            FAIL("expected a parity error");
        } catch (const ConfigError &e) {
            CHECK(std::string(e.what()).find("parity") != std::string::npos);
            CHECK(std::string(e.what()).find("model.M") == 0);
        }
    }

    TEST_CASE("scaling block") {
        const std::string model = "[model]\nvariant = entangled_singles\n";
        const auto c = parse_config_text(model + "[scaling]\naxis = M\nvalues = 1, 2, 4, 8, 16\n");
        REQUIRE(c.scaling.has_value());
        CHECK(c.scaling->axis == ScalingAxis::M);
        CHECK(c.scaling->values == std::vector<double>{1, 2, 4, 8, 16});
        CHECK(key_of(model + "[scaling]\naxis = M\nvalues = \n") == "scaling.values");
        CHECK(key_of(model + "[scaling]\naxis = M\n") == "scaling.values");
        CHECK(key_of(model + "[scaling]\naxis = M\nvalues = 1, 2, 4\n") == "scaling.values");
        CHECK(key_of(model + "[scaling]\naxis = M\nvalues = 1, 2, 2.5, 4\n") == "scaling.values");
        CHECK(key_of(model + "[scaling]\naxis = M\nvalues = 2, 2, 2, 2\n") == "scaling.values");
        CHECK(key_of(model + "[scaling]\naxis = K\nvalues = 1, 2, 4, 8\n") == "scaling.axis");
        CHECK(key_of(model + "[scaling]\naxis = N\nvalues = 1, 2, 4, 8\n") == "scaling.axis");
        CHECK(key_of("[model]\nvariant = partial_pairs\n[scaling]\naxis = M\nvalues = 2, 4, 5, 8\n") ==
              "scaling.values");
        CHECK(key_of("[model]\nvariant = fock_pulse\n[scaling]\naxis = N\nvalues = 1, 2, 4, 8\n") == "<accepted>");
    }

    TEST_CASE("loss map grids") {
        const std::string model = "[model]\nvariant = entangled_singles\n";
        const auto c = parse_config_text(model + "[loss_map]\nm_values = 2:4, 8\neta_steps = 4\n");
        CHECK(c.loss_map.m_values == std::vector<int>{2, 3, 4, 8});
        CHECK(c.loss_map.eta_values == std::vector<double>{0.25, 0.5, 0.75, 1.0});
        CHECK(key_of(model + "[loss_map]\neta_values = 0.5\neta_steps = 4\n") == "loss_map.eta_steps");
        CHECK(key_of(model + "[loss_map]\neta_values = 0.5, 1.5\n") == "loss_map.eta_values");
        CHECK(key_of(model + "[loss_map]\nm_values = 4:2\n") == "loss_map.m_values");
        CHECK(key_of(model + "[loss_map]\nm_values = 0, 2\n") == "loss_map.m_values");
    }

    TEST_CASE("malformed files") {
        CHECK(key_of("[model\nvariant = x\n").empty());
        CHECK(key_of("stray = 1\n[model]\nvariant = entangled_singles\n") == "stray");
        CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
    }

    TEST_CASE("serialize round-trips") {
        const std::vector<std::string> texts = {
            "[model]\nvariant = entangled_singles\nM = 4\n",
            "[spectrum]\nkind = lorentzian\ncenter = 12.5\nwidth = 0.3\n[model]\nvariant = classical_coherent\nM = 3\n"
            "N = 2.5\n[campaign]\neta = 0.35\ntrials = 2000\nseed = 18446744073709551615\nthreads = 4\n"
            "[scaling]\naxis = N\nvalues = 1, 1.5, 2, 4\n[loss_map]\nm_values = 3:5\neta_values = 0.1, 0.7\n"
            "[sampler]\ngrid_size = 2048\nwindow_factor = 6.5\n[units]\ntime = 1e-15\nlength = 2.998e-7\n"
            "[output]\npath = out.csv\ndump_trials = true\n",
            "[model]\nvariant = twin_beam\n",
        };
        for (const auto &t : texts) {
            const auto c = parse_config_text(t);
            const auto again = parse_config_text(serialize(c));
            CHECK(again == c);
            CHECK(serialize(again) == serialize(c));
            CHECK(validate(again) == c);
        }
    }

    TEST_CASE("tabulated tables resolve against the config directory") {
        qtoa::testing::TempDir dir;
        dir.write("gauss.csv", gaussian_table_csv());
        const auto path = dir.write("scenario.ini",
                                    "[spectrum]\nkind = tabulated\ntable = gauss.csv\n"
                                    "[model]\nvariant = entangled_singles\nM = 2\n");
        const auto c = load_config(path);
        CHECK(c.spectrum.table == dir.file("gauss.csv"));
        std::vector<std::string> warnings;
        const auto model = build_model(c, &warnings);
        CHECK(model.spectrum.kind() == SpectrumKind::Tabulated);
        CHECK(model.spectrum.width() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(parse_config_text(serialize(c)) == c);
    }

    TEST_CASE("models built from configs") {
        const auto c = parse_config_text("[spectrum]\nkind = lorentzian\nwidth = 2\n"
                                         "[model]\nvariant = entangled_fock\nM = 3\nN = 2\n"
                                         "[sampler]\ngrid_size = 2048\nwindow_factor = 4\n");
        const auto m = build_model(c);
        CHECK(m.kind() == ModelKind::EntangledFock);
        CHECK(m.detectors() == 3);
        CHECK(m.photons_per_pulse() == 2.0);
        CHECK(m.spectrum.kind() == SpectrumKind::Lorentzian);
        CHECK(m.spectrum.width() == 2.0);
        const auto options = sampler_options(c);
        CHECK(options.grid_size == 2048);
        CHECK(options.offset_window_factor == 4.0);
        for (const char *name : {"classical_coherent", "unentangled_singles", "entangled_singles", "fock_pulse",
                                 "entangled_fock", "partial_pairs", "twin_beam"}) {
            const auto model = build_model(parse_config_text(std::string("[model]\nvariant = ") + name + "\n"));
            CHECK(model.name() == name);
        }
    }
}
