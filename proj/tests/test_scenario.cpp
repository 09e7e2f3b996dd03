// SPDX-License-Identifier: Apache-2.0
//
// misosim - multiuser MISO downlink training, estimation and precoding simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "misosim/errors.hpp"
#include "misosim/presets.hpp"
#include "misosim/scenario.hpp"

using namespace misosim;

TEST_CASE("minimal config fills defaults", "[scenario]")
{
    const ScenarioConfig cfg = parse_config("M = 32\n"
                                            "K = 5\n"
                                            "T_dl = 16\n"
                                            "power_grid_db = -20..40 step 5\n");
    CHECK(cfg.num_antennas == 32);
    CHECK(cfg.num_users == 5);
    CHECK(cfg.num_pilots == 16);
    CHECK(cfg.coherence_length == 200);
    CHECK(cfg.n_cov == 100);
    CHECK(cfg.n_ch == 200);
    CHECK(cfg.pilot_kind == PilotKind::DftSubset);
    CHECK(!cfg.feedback_power_db.has_value());
    REQUIRE(cfg.power_grid_db.size() == 13);
    CHECK(cfg.power_grid_db.front() == -20.0);
    CHECK(cfg.power_grid_db.back() == 40.0);
    CHECK(std::holds_alternative<UmiModelParams>(cfg.channel));
}

TEST_CASE("comma lists and nested channel keys parse", "[scenario]")
{
    const ScenarioConfig cfg = parse_config("M = 8\n"
                                            "K = 2\n"
                                            "T_dl = 4\n"
                                            "power_grid_db = 0, 10, 20\n"
                                            "estimators = LS, Genie\n"
                                            "precoders = ZF\n"
                                            "pilot_kind = identity_subset\n"
                                            "feedback_power_db = 10\n"
                                            "master_seed = 77\n"
                                            "channel_model = umi\n"
                                            "channel.num_paths = 3\n"
                                            "channel.num_rays = 7\n"
                                            "channel.pathloss = distance_based\n");
    CHECK(cfg.power_grid_db == std::vector<double>{0.0, 10.0, 20.0});
    REQUIRE(cfg.estimators.size() == 2);
    CHECK(cfg.estimators[0] == Estimator::LS);
    CHECK(cfg.estimators[1] == Estimator::Genie);
    CHECK(cfg.precoders == std::vector<Precoder>{Precoder::ZF});
    CHECK(cfg.pilot_kind == PilotKind::IdentitySubset);
    CHECK(cfg.feedback_power_db == 10.0);
    CHECK(cfg.master_seed == 77);
    const auto& umi = std::get<UmiModelParams>(cfg.channel);
    CHECK(umi.num_paths == 3);
    CHECK(umi.num_rays == 7);
    CHECK(umi.pathloss == PathlossMode::DistanceBased);
}

TEST_CASE("scaled identity and file channel models parse", "[scenario]")
{
    const ScenarioConfig scaled = parse_config("M = 4\nK = 2\nT_dl = 2\n"
                                               "power_grid_db = 0\n"
                                               "channel_model = scaled_identity\n"
                                               "channel.c = 2.5\n");
    CHECK(std::get<ScaledIdentityModel>(scaled.channel).c == 2.5);

    const ScenarioConfig file = parse_config("M = 4\nK = 2\nT_dl = 2\n"
                                             "power_grid_db = 0\n"
                                             "channel_model = file\n"
                                             "channel.path = cov.txt\n");
    CHECK(std::get<CovarianceFileModel>(file.channel).path == "cov.txt");
}

TEST_CASE("unknown keys are rejected with a line number", "[scenario]")
{
    try
    {
        parse_config("M = 8\nK = 2\nT_dl = 4\npower_grid_db = 0\nbogus_key = 3\n");
        FAIL("expected ParseError");
    }
    catch (const ParseError& e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("line 5") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("malformed values are rejected with diagnostics", "[scenario]")
{
    CHECK_THROWS_AS(parse_config("M = eight\nK = 2\nT_dl = 4\npower_grid_db = 0\n"), ParseError);
    CHECK_THROWS_AS(parse_config("M 8\n"), ParseError);
    CHECK_THROWS_AS(parse_config("M = 8\nM = 9\nK=2\nT_dl=4\npower_grid_db=0\n"), ParseError);
    CHECK_THROWS_AS(parse_config("M = 8\nK = 2\nT_dl = 4\npower_grid_db = 0\n"
                                 "estimators = LS, Turbo\n"),
                    ParseError);
}

TEST_CASE("validation names the violated invariant", "[scenario]")
{
    try
    {
        parse_config("M = 32\nK = 5\nT_dl = 64\npower_grid_db = 0\n");
        FAIL("expected ValidationError");
    }
    catch (const ValidationError& e)
    {
        CHECK(std::string(e.what()).find("T_dl <= M") != std::string::npos);
    }

    try
    {
        parse_config("M = 256\nK = 5\nT_dl = 200\nT_coh = 200\npower_grid_db = 0\n");
        FAIL("expected ValidationError");
    }
    catch (const ValidationError& e)
    {
        CHECK(std::string(e.what()).find("prelog") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("M = 4\nK = 5\nT_dl = 4\npower_grid_db = 0\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("M = 4\nK = 2\nT_dl = 4\npower_grid_db = 0\n"
                                 "estimators = LS,LS\n"),
                    ValidationError);
}

TEST_CASE("power conversion", "[scenario]")
{
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(std::abs(db_to_linear(10.0) - 10.0) < 1e-12);
    CHECK(std::abs(db_to_linear(-20.0) - 0.01) < 1e-15);
}

TEST_CASE("figure presets", "[scenario]")
{
    const FigurePreset fig4 = figure_preset("fig4");
    REQUIRE(fig4.runs.size() == 1);
    const ScenarioConfig& cfg = fig4.runs[0].config;
    CHECK(cfg.num_antennas == 32);
    CHECK(cfg.num_users == 5);
    CHECK(cfg.num_pilots == 16);
    CHECK(cfg.estimators ==
          std::vector<Estimator>{Estimator::LS, Estimator::LMMSE, Estimator::Genie});
    CHECK(cfg.precoders == std::vector<Precoder>{Precoder::ZF, Precoder::MF});
    CHECK(cfg.power_grid_db.size() == 13);
    CHECK(cfg.n_cov == 100);
    CHECK(cfg.n_ch == 200);

    const FigurePreset fig4_quick = figure_preset("fig4", true);
    CHECK(fig4_quick.runs[0].config.n_cov == 20);
    CHECK(fig4_quick.runs[0].config.n_ch == 50);

    const FigurePreset fig6 = figure_preset("fig6");
    REQUIRE(fig6.runs.size() == 5);
    CHECK(fig6.runs[0].config.num_pilots == 32);
    CHECK(fig6.runs[4].config.num_pilots == 3);
    for (const auto& run : fig6.runs)
    {
        CHECK(run.config.estimators == std::vector<Estimator>{Estimator::LS});
        CHECK(run.config.precoders == std::vector<Precoder>{Precoder::ZF});
    }

    const FigurePreset fig7 = figure_preset("fig7");
    REQUIRE(fig7.runs.size() == 2);
    CHECK(fig7.runs[0].config.feedback_power_db == 10.0);

    const FigurePreset fig8 = figure_preset("fig8");
    CHECK(fig8.runs[0].config.num_antennas == 64);
    CHECK(fig8.runs[0].config.num_users == 10);
    CHECK(fig8.runs[0].config.num_pilots == 32);

    CHECK_THROWS_AS(figure_preset("fig9"), UnknownPreset);

    // Every preset validates; T_dl = 3 < K = 5 is allowed by construction.
    for (const std::string& name : preset_names())
        for (const auto& run : figure_preset(name, true).runs)
            validate_config(run.config);
}
