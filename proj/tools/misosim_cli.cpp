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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "misosim/presets.hpp"
#include "misosim/sweep.hpp"
#include "misosim/verify.hpp"

namespace
{

std::string labeled_path(const std::string& base, const std::string& label)
{
    if (label.empty())
        return base;
    const auto dot = base.rfind('.');
    if (dot == std::string::npos || base.find('/', dot) != std::string::npos)
        return base + "_" + label;
    return base.substr(0, dot) + "_" + label + base.substr(dot);
}

void run_and_write(const misosim::ScenarioConfig& cfg, const std::string& out_path,
                   unsigned workers)
{
    const misosim::SweepResult result = misosim::run_power_sweep(cfg, workers);
    misosim::write_csv(result, out_path);
    misosim::write_diagnostics(result, out_path + ".diag.csv");

    std::size_t failures = 0;
    for (const auto& d : result.diagnostics)
        failures += d.failures;
    std::cout << "wrote " << out_path << " (" << result.rows.size() << " rows";
    if (failures > 0)
        std::cout << ", " << failures << " rank-deficient trials, see " << out_path
                  << ".diag.csv";
    std::cout << ")\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multiuser MISO downlink training / estimation / precoding simulator"};
    app.require_subcommand(1);

    // run
    std::string run_config;
    std::string run_out = "sweep.csv";
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    unsigned run_workers = 0;
    auto* run_cmd = app.add_subcommand("run", "run the power sweep described by a config file");
    run_cmd->add_option("config", run_config, "config file path")->required();
    run_cmd->add_option("--out", run_out, "output CSV path");
    run_cmd->add_option("--seed", run_seed, "override the master seed")
        ->each([&](const std::string&) { run_seed_set = true; });
    run_cmd->add_option("--workers", run_workers, "worker threads (0 = hardware)");

    // preset
    std::string preset_name;
    std::string preset_out;
    bool preset_quick = false;
    std::uint64_t preset_seed = 0;
    bool preset_seed_set = false;
    unsigned preset_workers = 0;
    auto* preset_cmd = app.add_subcommand("preset", "run a named figure preset (fig1..fig8)");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_option("--out", preset_out, "output CSV path (default <name>.csv)");
    preset_cmd->add_flag("--quick", preset_quick, "shrink the Monte-Carlo depth to 20 x 50");
    preset_cmd->add_option("--seed", preset_seed, "override the master seed")
        ->each([&](const std::string&) { preset_seed_set = true; });
    preset_cmd->add_option("--workers", preset_workers, "worker threads (0 = hardware)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the analytic identity checks");

    // mse-oracle
    std::string oracle_config;
    auto* oracle_cmd =
        app.add_subcommand("mse-oracle", "closed-form vs Monte-Carlo estimation error table");
    oracle_cmd->add_option("config", oracle_config, "config file path")->required();

    // gnuplot
    std::string plot_csv;
    std::string plot_metric = "sum_rate";
    auto* plot_cmd =
        app.add_subcommand("gnuplot", "print a gnuplot script for a sweep CSV");
    plot_cmd->add_option("csv", plot_csv, "sweep CSV path")->required();
    plot_cmd->add_option("--metric", plot_metric, "metric to plot (sum_rate or mse)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run_cmd)
        {
            misosim::ScenarioConfig cfg = misosim::load_config(run_config);
            if (run_seed_set)
                cfg.master_seed = run_seed;
            run_and_write(cfg, run_out, run_workers);
        }
        else if (*preset_cmd)
        {
            misosim::FigurePreset preset = misosim::figure_preset(preset_name, preset_quick);
            const std::string base = preset_out.empty() ? preset_name + ".csv" : preset_out;
            for (auto& run : preset.runs)
            {
                if (preset_seed_set)
                    run.config.master_seed = preset_seed;
                run_and_write(run.config, labeled_path(base, run.label), preset_workers);
            }
        }
        else if (*verify_cmd)
        {
            const bool ok = misosim::run_verification(std::cout);
            std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
            return ok ? 0 : 1;
        }
        else if (*oracle_cmd)
        {
            misosim::print_mse_oracle_table(misosim::load_config(oracle_config), std::cout);
        }
        else if (*plot_cmd)
        {
            // Long-format CSV; emit one awk-filtered plot line per curve.
            std::cout << "set datafile separator ','\n"
                      << "set xlabel 'DL transmit power [dB]'\n"
                      << "set ylabel '" << plot_metric << "'\n"
                      << "set key top left\n";
            if (plot_metric == "mse")
                std::cout << "set logscale y\n";
            std::cout << "plot \\\n";
            bool first = true;
            for (const char* est : {"Genie", "LMMSE", "LS"})
            {
                for (const char* prec : {"MF", "ZF"})
                {
                    if (!first)
                        std::cout << ", \\\n";
                    first = false;
                    std::cout << "  \"< awk -F, '$2==\\\"" << est << "\\\" && $3==\\\"" << prec
                              << "\\\" && $4==\\\"" << plot_metric << "\\\"' " << plot_csv
                              << "\" using 1:5 with linespoints title '" << est << "-" << prec
                              << "'";
                }
            }
            std::cout << '\n';
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
