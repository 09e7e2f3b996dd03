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

#include "misosim/presets.hpp"

#include "misosim/errors.hpp"

namespace misosim
{

namespace
{

std::vector<double> default_power_grid()
{
    std::vector<double> grid;
    for (int db = -20; db <= 40; db += 5)
        grid.push_back(static_cast<double>(db));
    return grid;
}

ScenarioConfig base_config(bool quick)
{
    ScenarioConfig cfg;
    cfg.num_antennas = 32;
    cfg.num_users = 5;
    cfg.num_pilots = 16;
    cfg.coherence_length = 200;
    cfg.power_grid_db = default_power_grid();
    cfg.n_cov = quick ? 20 : 100;
    cfg.n_ch = quick ? 50 : 200;
    cfg.pilot_kind = PilotKind::DftSubset;
    cfg.channel = UmiModelParams{};
    cfg.master_seed = 1;
    return cfg;
}

ScenarioConfig with_pilots(ScenarioConfig cfg, arma::uword num_pilots)
{
    cfg.num_pilots = num_pilots;
    return cfg;
}

std::vector<PresetRun> pilot_length_sweep(ScenarioConfig base)
{
    std::vector<PresetRun> runs;
    for (const arma::uword t : {arma::uword(32), arma::uword(31), arma::uword(16), arma::uword(8),
                                arma::uword(3)})
        runs.push_back(PresetRun{"tdl" + std::to_string(t), with_pilots(base, t)});
    return runs;
}

} // namespace

FigurePreset figure_preset(const std::string& name, bool quick)
{
    ScenarioConfig cfg = base_config(quick);

    if (name == "fig1")
    {
        // Contamination-free MSE curves.
        cfg.num_pilots = 32;
        cfg.estimators = {Estimator::LS, Estimator::LMMSE};
        cfg.precoders = {Precoder::ZF};
        return FigurePreset{name, {PresetRun{"", cfg}}};
    }
    if (name == "fig2")
    {
        // Contamination-free sum rates, all precoders.
        cfg.num_pilots = 32;
        cfg.estimators = {Estimator::LS, Estimator::LMMSE, Estimator::Genie};
        cfg.precoders = {Precoder::ZF, Precoder::MF};
        return FigurePreset{name, {PresetRun{"", cfg}}};
    }
    if (name == "fig3")
    {
        // MSE error floors with T_dl < M.
        cfg.num_pilots = 16;
        cfg.estimators = {Estimator::LS, Estimator::LMMSE};
        cfg.precoders = {Precoder::ZF};
        return FigurePreset{name, {PresetRun{"", cfg}}};
    }
    if (name == "fig4")
    {
        // Sum rates with T_dl < M: LS-ZF keeps the genie slope, LMMSE-ZF saturates.
        cfg.num_pilots = 16;
        cfg.estimators = {Estimator::LS, Estimator::LMMSE, Estimator::Genie};
        cfg.precoders = {Precoder::ZF, Precoder::MF};
        return FigurePreset{name, {PresetRun{"", cfg}}};
    }
    if (name == "fig5")
    {
        // LMMSE-ZF across pilot lengths.
        cfg.estimators = {Estimator::LMMSE};
        cfg.precoders = {Precoder::ZF};
        return FigurePreset{name, pilot_length_sweep(cfg)};
    }
    if (name == "fig6")
    {
        // LS-ZF across pilot lengths; T_dl = 3 < K exercises the rank failure.
        cfg.estimators = {Estimator::LS};
        cfg.precoders = {Precoder::ZF};
        return FigurePreset{name, pilot_length_sweep(cfg)};
    }
    if (name == "fig7")
    {
        // Noisy feedback at P_fb = 10 dB.
        cfg.estimators = {Estimator::LS, Estimator::LMMSE};
        cfg.precoders = {Precoder::ZF};
        cfg.feedback_power_db = 10.0;
        std::vector<PresetRun> runs;
        runs.push_back(PresetRun{"tdl32", with_pilots(cfg, 32)});
        runs.push_back(PresetRun{"tdl16", with_pilots(cfg, 16)});
        return FigurePreset{name, runs};
    }
    if (name == "fig8")
    {
        // Large array, more users, distance-based pathloss in a 250 m cell.
        cfg.num_antennas = 64;
        cfg.num_users = 10;
        cfg.num_pilots = 32;
        cfg.estimators = {Estimator::LS, Estimator::LMMSE, Estimator::Genie};
        cfg.precoders = {Precoder::ZF, Precoder::MF};
        UmiModelParams umi;
        umi.pathloss = PathlossMode::DistanceBased;
        cfg.channel = umi;
        return FigurePreset{name, {PresetRun{"", cfg}}};
    }

    throw UnknownPreset("unknown preset '" + name + "' (expected fig1..fig8)");
}

std::vector<std::string> preset_names()
{
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

} // namespace misosim
