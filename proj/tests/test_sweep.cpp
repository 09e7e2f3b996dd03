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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "misosim/errors.hpp"
#include "misosim/presets.hpp"
#include "misosim/sweep.hpp"

using namespace misosim;

namespace
{

ScenarioConfig small_config()
{
    ScenarioConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_users = 3;
    cfg.num_pilots = 4;
    cfg.coherence_length = 200;
    cfg.power_grid_db = {0.0, 10.0};
    cfg.n_cov = 2;
    cfg.n_ch = 3;
    cfg.estimators = {Estimator::LS, Estimator::LMMSE, Estimator::Genie};
    cfg.precoders = {Precoder::ZF, Precoder::MF};
    cfg.master_seed = 4242;
    return cfg;
}

double row_mean(const SweepResult& result, double power_db, Estimator est, Precoder prec,
                MetricKind metric)
{
    for (const auto& row : result.rows)
        if (row.power_db == power_db && row.estimator == est && row.precoder == prec &&
            row.metric == metric)
            return row.mean;
    FAIL("row not found");
    return 0.0;
}

double row_stderr(const SweepResult& result, double power_db, Estimator est, Precoder prec,
                  MetricKind metric)
{
    for (const auto& row : result.rows)
        if (row.power_db == power_db && row.estimator == est && row.precoder == prec &&
            row.metric == metric)
            return row.standard_error;
    FAIL("row not found");
    return 0.0;
}

} // namespace

TEST_CASE("trials are deterministic", "[sweep]")
{
    const ScenarioConfig cfg = small_config();
    const TrialResult a = run_trial(cfg, 10.0, 4);
    const TrialResult b = run_trial(cfg, 10.0, 4);
    REQUIRE(a.combos.size() == b.combos.size());
    for (std::size_t i = 0; i < a.combos.size(); ++i)
    {
        CHECK(a.combos[i].sum_rate == b.combos[i].sum_rate);
        CHECK(a.combos[i].failed == b.combos[i].failed);
    }
    REQUIRE(a.mse.size() == b.mse.size());
    for (std::size_t i = 0; i < a.mse.size(); ++i)
        CHECK(a.mse[i].second == b.mse[i].second);
}

TEST_CASE("genie estimates have zero error and nulled interference", "[sweep]")
{
    const ScenarioConfig cfg = small_config();
    const TrialResult tr = run_trial(cfg, 0.0, 1);
    for (const auto& [estimator, mse] : tr.mse)
        if (estimator == Estimator::Genie)
            CHECK(mse == 0.0);

    // Rebuild the trial's channel draw from the public seed streams and check
    // the genie zero-forcing effective channel directly.
    const std::size_t cov_index = 1 / cfg.n_ch;
    const std::size_t ch_index = 1 % cfg.n_ch;
    Rng cov_rng(derive_seed(cfg.master_seed,
                            {static_cast<std::uint64_t>(SeedStream::Covariance), cov_index}));
    const SteeringParams steer{cfg.num_antennas, cfg.antenna_spacing};
    const auto& umi = std::get<UmiModelParams>(cfg.channel);
    std::vector<CovarianceFactor> factors;
    for (arma::uword k = 0; k < cfg.num_users; ++k)
        factors.push_back(factorize(build_umi_covariance(umi, steer, cov_rng), 1e-12));

    Rng ch_rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(SeedStream::Channel),
                                             cov_index, ch_index}));
    arma::cx_mat h(cfg.num_antennas, cfg.num_users);
    for (arma::uword k = 0; k < cfg.num_users; ++k)
        h.col(k) = sample_channel(factors[k], arma::cx_vec(), ch_rng);

    const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h));
    const arma::mat gains = arma::square(arma::abs(effective_channel(h, p)));
    const double diag_power = arma::accu(gains.diag());
    const double offdiag_power = arma::accu(gains) - diag_power;
    CHECK(offdiag_power < 1e-18 * diag_power);

    // The same reconstruction must reproduce the trial's genie-ZF rate.
    const double sigma2 = 1.0; // 0 dB
    const double expected =
        rates(h, p, sigma2, cfg.num_pilots, cfg.coherence_length).sum_rate;
    for (const auto& combo : tr.combos)
        if (combo.estimator == Estimator::Genie && combo.precoder == Precoder::ZF)
            CHECK(combo.sum_rate == expected);
}

TEST_CASE("noiseless LS trials null the interference", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.noiseless_training = true;
    cfg.estimators = {Estimator::LS};
    cfg.precoders = {Precoder::ZF};

    Rng pilot_rng(0);
    const PilotMatrix pilots =
        make_pilot_matrix(cfg.num_antennas, cfg.num_pilots, cfg.pilot_kind, pilot_rng);

    for (const std::size_t trial : {std::size_t(0), std::size_t(3), std::size_t(5)})
    {
        const std::size_t cov_index = trial / cfg.n_ch;
        const std::size_t ch_index = trial % cfg.n_ch;

        Rng cov_rng(derive_seed(cfg.master_seed,
                                {static_cast<std::uint64_t>(SeedStream::Covariance), cov_index}));
        const SteeringParams steer{cfg.num_antennas, cfg.antenna_spacing};
        const auto& umi = std::get<UmiModelParams>(cfg.channel);
        std::vector<CovarianceFactor> factors;
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            factors.push_back(factorize(build_umi_covariance(umi, steer, cov_rng), 1e-12));

        Rng ch_rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(SeedStream::Channel),
                                                 cov_index, ch_index}));
        arma::cx_mat h(cfg.num_antennas, cfg.num_users);
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            h.col(k) = sample_channel(factors[k], arma::cx_vec(), ch_rng);

        arma::cx_mat h_hat(cfg.num_antennas, cfg.num_users);
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            h_hat.col(k) = asymptotic_ls(pilots, h.col(k)).h_hat;
        const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h_hat));
        const arma::mat gains = arma::square(arma::abs(effective_channel(h, p)));
        const double diag_power = arma::accu(gains.diag());
        const double offdiag_power = arma::accu(gains) - diag_power;
        CHECK(offdiag_power < 1e-18 * diag_power);

        const double expected =
            rates(h, p, 1.0, cfg.num_pilots, cfg.coherence_length).sum_rate;
        const TrialResult tr = run_trial(cfg, 0.0, trial);
        CHECK(std::abs(tr.combos[0].sum_rate - expected) <= 1e-12 * expected);
    }
}

TEST_CASE("single-trial sweep equals the trial", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.n_cov = 1;
    cfg.n_ch = 1;
    cfg.power_grid_db = {5.0};
    const SweepResult sweep = run_power_sweep(cfg, 1);
    const TrialResult tr = run_trial(cfg, 5.0, 0);

    for (const auto& combo : tr.combos)
    {
        const double mean =
            row_mean(sweep, 5.0, combo.estimator, combo.precoder, MetricKind::SumRate);
        CHECK(mean == combo.sum_rate);
        CHECK(row_stderr(sweep, 5.0, combo.estimator, combo.precoder, MetricKind::SumRate) ==
              0.0);
    }
}

TEST_CASE("sweep means equal the mean of recomputed trials", "[sweep]")
{
    const ScenarioConfig cfg = small_config();
    const SweepResult sweep = run_power_sweep(cfg, 1);

    const std::size_t n_trials = cfg.n_cov * cfg.n_ch;
    for (const double power : cfg.power_grid_db)
    {
        std::vector<TrialResult> trials;
        for (std::size_t t = 0; t < n_trials; ++t)
            trials.push_back(run_trial(cfg, power, t));

        for (std::size_t e = 0; e < cfg.estimators.size(); ++e)
        {
            for (std::size_t r = 0; r < cfg.precoders.size(); ++r)
            {
                double acc = 0.0;
                for (const auto& tr : trials)
                    acc += tr.combos[e * cfg.precoders.size() + r].sum_rate;
                acc /= static_cast<double>(n_trials);
                const double mean = row_mean(sweep, power, cfg.estimators[e], cfg.precoders[r],
                                             MetricKind::SumRate);
                CHECK(std::abs(mean - acc) <= 1e-12 * std::max(std::abs(acc), 1.0));
            }
            double mse_acc = 0.0;
            for (const auto& tr : trials)
                mse_acc += tr.mse[e].second;
            mse_acc /= static_cast<double>(n_trials);
            const double mse_mean = row_mean(sweep, power, cfg.estimators[e], cfg.precoders[0],
                                             MetricKind::Mse);
            CHECK(std::abs(mse_mean - mse_acc) <= 1e-12 * std::max(std::abs(mse_acc), 1.0));
        }
    }
}

TEST_CASE("worker count does not change the CSV bytes", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.n_cov = 4;
    const SweepResult one = run_power_sweep(cfg, 1);
    const SweepResult three = run_power_sweep(cfg, 3);
    CHECK(csv_to_string(one) == csv_to_string(three));
}

TEST_CASE("standard error shrinks with the sample count", "[sweep]")
{
    // Doubling n_ch should shrink the standard error by about 1/sqrt(2).
    ScenarioConfig cfg = small_config();
    cfg.power_grid_db = {10.0};
    cfg.estimators = {Estimator::LS};
    cfg.precoders = {Precoder::ZF};
    cfg.n_cov = 2;

    double ratio_acc = 0.0;
    const int n_seeds = 8;
    for (int seed = 0; seed < n_seeds; ++seed)
    {
        cfg.master_seed = 1000 + static_cast<std::uint64_t>(seed);
        cfg.n_ch = 40;
        const double se_small =
            row_stderr(run_power_sweep(cfg, 1), 10.0, Estimator::LS, Precoder::ZF,
                       MetricKind::SumRate);
        cfg.n_ch = 80;
        const double se_large =
            row_stderr(run_power_sweep(cfg, 1), 10.0, Estimator::LS, Precoder::ZF,
                       MetricKind::SumRate);
        ratio_acc += se_large / se_small;
    }
    const double mean_ratio = ratio_acc / n_seeds;
    const double expected = 1.0 / std::sqrt(2.0);
    CHECK(mean_ratio > expected * 0.7);
    CHECK(mean_ratio < expected * 1.3);
}

TEST_CASE("genie zero-forcing mean rate increases across the grid", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.power_grid_db = {-10.0, 0.0, 10.0, 20.0};
    cfg.estimators = {Estimator::Genie};
    cfg.precoders = {Precoder::ZF};
    const SweepResult sweep = run_power_sweep(cfg, 1);

    double previous = -1.0;
    for (const double power : cfg.power_grid_db)
    {
        const double mean =
            row_mean(sweep, power, Estimator::Genie, Precoder::ZF, MetricKind::SumRate);
        CHECK(mean > previous);
        previous = mean;
    }
}

TEST_CASE("too few pilots for LS zero forcing fails every trial", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.num_users = 5;
    cfg.num_pilots = 3; // T_dl < K
    cfg.estimators = {Estimator::LS};
    cfg.precoders = {Precoder::ZF};
    cfg.power_grid_db = {0.0};
    const SweepResult sweep = run_power_sweep(cfg, 1);

    REQUIRE(sweep.diagnostics.size() == 1);
    CHECK(sweep.diagnostics[0].failures == cfg.n_cov * cfg.n_ch);
    CHECK(sweep.diagnostics[0].n_trials == cfg.n_cov * cfg.n_ch);
    CHECK(row_mean(sweep, 0.0, Estimator::LS, Precoder::ZF, MetricKind::SumRate) == 0.0);
}

TEST_CASE("csv output format", "[sweep]")
{
    const std::string header = "power_db,estimator,precoder,metric,mean,stderr,n\n";
    CHECK(csv_to_string(SweepResult{}) == header);

    SweepResult one;
    one.rows.push_back(SweepRow{-5.0, Estimator::LMMSE, Precoder::MF, MetricKind::SumRate,
                                1.25, 0.0625, 42});
    const std::string text = csv_to_string(one);
    CHECK(text == header + "-5,LMMSE,MF,sum_rate,1.25,0.0625,42\n");
}

TEST_CASE("csv row ordering and count match the scenario", "[sweep]")
{
    FigurePreset preset = figure_preset("fig4", true);
    ScenarioConfig cfg = preset.runs[0].config;
    cfg.n_cov = 1;
    cfg.n_ch = 2;
    const SweepResult sweep = run_power_sweep(cfg, 1);

    // powers x estimators x precoders x metrics
    CHECK(sweep.rows.size() == 13u * 3u * 2u * 2u);

    // Rows are sorted by power, then estimator, precoder and metric names.
    const auto& rows = sweep.rows;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const auto key = [](const SweepRow& r) {
            return std::tuple<double, std::string, std::string, std::string>(
                r.power_db, estimator_name(r.estimator), precoder_name(r.precoder),
                metric_name(r.metric));
        };
        CHECK(key(rows[i - 1]) < key(rows[i]));
    }
    CHECK(rows[0].power_db == -20.0);
    CHECK(estimator_name(rows[0].estimator) == std::string("Genie"));
    CHECK(precoder_name(rows[0].precoder) == std::string("MF"));
    CHECK(metric_name(rows[0].metric) == std::string("mse"));
}

TEST_CASE("csv files round-trip through the filesystem", "[sweep]")
{
    ScenarioConfig cfg = small_config();
    cfg.power_grid_db = {0.0};
    cfg.n_cov = 1;
    cfg.n_ch = 1;
    const SweepResult sweep = run_power_sweep(cfg, 1);

    const std::string path = "test_sweep_roundtrip.csv";
    write_csv(sweep, path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == csv_to_string(sweep));
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_csv(sweep, "no_such_dir/file.csv"), IoError);
}
