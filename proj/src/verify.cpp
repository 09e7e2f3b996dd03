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

#include "misosim/verify.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <variant>

#include "misosim/errors.hpp"
#include "misosim/metrics.hpp"
#include "misosim/sweep.hpp"

namespace misosim
{

namespace
{

struct CheckReporter
{
    std::ostream& out;
    bool all_passed = true;

    void operator()(const std::string& name, bool ok)
    {
        out << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
        all_passed = all_passed && ok;
    }
};

// K covariances plus channel draws from the default multipath model.
struct DrawnScenario
{
    std::vector<ChannelCovariance> covariances;
    arma::cx_mat h_true;
};

DrawnScenario draw_scenario(arma::uword m, arma::uword k, Rng& rng)
{
    const SteeringParams steer{m, 0.5};
    const UmiModelParams umi;
    DrawnScenario s;
    s.h_true.set_size(m, k);
    for (arma::uword u = 0; u < k; ++u)
    {
        s.covariances.push_back(build_umi_covariance(umi, steer, rng));
        const CovarianceFactor f = factorize(s.covariances.back(), 1e-12);
        s.h_true.col(u) = sample_channel(f, arma::cx_vec(), rng);
    }
    return s;
}

double max_offdiag(const arma::mat& gains)
{
    double v = 0.0;
    for (arma::uword i = 0; i < gains.n_rows; ++i)
        for (arma::uword j = 0; j < gains.n_cols; ++j)
            if (i != j)
                v = std::max(v, gains(i, j));
    return v;
}

} // namespace

bool run_verification(std::ostream& out, std::uint64_t seed)
{
    CheckReporter check{out};
    Rng rng(seed);

    // Pilot matrices have orthonormal columns for every kind.
    {
        bool ok = true;
        for (const PilotKind kind :
             {PilotKind::DftSubset, PilotKind::RandomSemiUnitary, PilotKind::IdentitySubset})
        {
            for (const arma::uword t : {arma::uword(1), arma::uword(16), arma::uword(32)})
            {
                const PilotMatrix pilots = make_pilot_matrix(32, t, kind, rng);
                const arma::cx_mat gram = pilots.matrix.t() * pilots.matrix;
                ok = ok && arma::abs(gram - arma::eye<arma::cx_mat>(t, t)).max() < 1e-10;
            }
        }
        check("pilot columns are orthonormal (all kinds)", ok);
    }

    // Estimate-based zero forcing nulls the true channel exactly when the
    // training is noiseless, for any T_dl >= K.
    {
        bool ok = true;
        for (const arma::uword t : {arma::uword(8), arma::uword(16), arma::uword(31)})
        {
            const PilotMatrix pilots = make_pilot_matrix(32, t, PilotKind::DftSubset, rng);
            for (int draw = 0; draw < 50; ++draw)
            {
                const DrawnScenario s = draw_scenario(32, 5, rng);
                arma::cx_mat h_hat(32, 5);
                for (arma::uword u = 0; u < 5; ++u)
                    h_hat.col(u) =
                        estimate_ls(pilots, observe(pilots, s.h_true.col(u), 0.0, rng)).h_hat;
                const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h_hat));
                const arma::mat gains = arma::abs(effective_channel(s.h_true, p));
                ok = ok && max_offdiag(gains) <= 1e-9 * gains.diag().min();
            }
        }
        check("noiseless LS zero forcing is interference-free", ok);
    }

    // Perfect-CSI zero forcing yields a scaled identity effective channel.
    {
        bool ok = true;
        for (int draw = 0; draw < 50; ++draw)
        {
            const DrawnScenario s = draw_scenario(32, 5, rng);
            const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(s.h_true));
            const arma::cx_mat eff = effective_channel(s.h_true, p);
            const arma::cx_mat target =
                p.normalization * arma::eye<arma::cx_mat>(5, 5);
            ok = ok && arma::abs(eff - target).max() <= 1e-9 * p.normalization;
        }
        check("genie zero forcing gives a scaled identity", ok);
    }

    // The covariance-weighted noiseless estimate leaves residual interference
    // when the pilots undersample the array.
    {
        const PilotMatrix pilots = make_pilot_matrix(32, 16, PilotKind::DftSubset, rng);
        int with_residual = 0;
        const int draws = 50;
        for (int draw = 0; draw < draws; ++draw)
        {
            const DrawnScenario s = draw_scenario(32, 5, rng);
            arma::cx_mat h_hat(32, 5);
            for (arma::uword u = 0; u < 5; ++u)
                h_hat.col(u) = asymptotic_lmmse(pilots, s.h_true.col(u), s.covariances[u]).h_hat;
            const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h_hat));
            const arma::mat gains = arma::square(arma::abs(effective_channel(s.h_true, p)));
            const double diag_power = arma::accu(gains.diag());
            const double offdiag_power = arma::accu(gains) - diag_power;
            if (offdiag_power > 1e-6 * diag_power)
                ++with_residual;
        }
        check("noiseless LMMSE zero forcing keeps residual interference",
              with_residual >= (9 * draws) / 10);
    }

    // With square pilots the analytic LS error equals M * sigma2.
    {
        bool ok = true;
        const PilotMatrix pilots = make_pilot_matrix(32, 32, PilotKind::DftSubset, rng);
        const DrawnScenario s = draw_scenario(32, 1, rng);
        for (const double sigma2 : {1.0, 1e-2, 1e-4})
        {
            const double mse = mse_closed_form_ls(pilots, s.covariances[0], sigma2);
            ok = ok && std::abs(mse - 32.0 * sigma2) <= 1e-9 * 32.0 * sigma2;
        }
        check("square-pilot LS error equals M * sigma2", ok);
    }

    // For proportional covariances the LMMSE estimate is a scaled LS estimate,
    // so both zero-forcing precoders coincide.
    {
        const PilotMatrix pilots = make_pilot_matrix(16, 8, PilotKind::DftSubset, rng);
        const ChannelCovariance cov = build_scaled_identity(2.5, 16);
        const CovarianceFactor f = factorize(cov, 1e-12);
        const double sigma2 = 0.3;
        arma::cx_mat ls_mat(16, 3), lmmse_mat(16, 3);
        for (arma::uword u = 0; u < 3; ++u)
        {
            const arma::cx_vec h = sample_channel(f, arma::cx_vec(), rng);
            const TrainingObservation obs = observe(pilots, h, sigma2, rng);
            ls_mat.col(u) = estimate_ls(pilots, obs).h_hat;
            lmmse_mat.col(u) = estimate_lmmse(pilots, obs, cov, sigma2).h_hat;
        }
        const PrecodingMatrix p_ls = zf_precoder(EstimatedChannelMatrix(ls_mat));
        const PrecodingMatrix p_lmmse = zf_precoder(EstimatedChannelMatrix(lmmse_mat));
        check("scaled-identity covariance: LS and LMMSE zero forcing coincide",
              arma::abs(p_ls.matrix - p_lmmse.matrix).max() < 1e-10);
    }

    // Vanishing-noise estimators agree with their asymptotic forms.
    {
        const PilotMatrix pilots = make_pilot_matrix(16, 8, PilotKind::DftSubset, rng);
        const DrawnScenario s = draw_scenario(16, 1, rng);
        const ChannelCovariance well_conditioned{
            0.5 * s.covariances[0].matrix +
                0.5 * arma::eye<arma::cx_mat>(16, 16),
            arma::cx_vec()};
        const arma::cx_vec h = s.h_true.col(0);
        const TrainingObservation noiseless = observe(pilots, h, 0.0, rng);

        const arma::cx_vec ls = estimate_ls(pilots, noiseless).h_hat;
        const arma::cx_vec ls_asy = asymptotic_ls(pilots, h).h_hat;

        TrainingObservation tiny = noiseless;
        tiny.noise_variance = 1e-10;
        const arma::cx_vec lmmse = estimate_lmmse(pilots, tiny, well_conditioned, 1e-10).h_hat;
        const arma::cx_vec lmmse_asy = asymptotic_lmmse(pilots, h, well_conditioned).h_hat;

        const bool ok = arma::abs(ls - ls_asy).max() <= 1e-12 * arma::abs(ls_asy).max() &&
                        arma::abs(lmmse - lmmse_asy).max() <= 1e-4 * arma::abs(lmmse_asy).max();
        check("estimators converge to their noiseless limits", ok);
    }

    // Precoder power normalization.
    {
        bool ok = true;
        for (int draw = 0; draw < 20; ++draw)
        {
            const DrawnScenario s = draw_scenario(16, 4, rng);
            const PrecodingMatrix zf = zf_precoder(EstimatedChannelMatrix(s.h_true));
            const PrecodingMatrix mf = mf_precoder(EstimatedChannelMatrix(s.h_true));
            const double zf_power = arma::accu(arma::square(arma::abs(zf.matrix)));
            const double mf_power = arma::accu(arma::square(arma::abs(mf.matrix)));
            ok = ok && std::abs(zf_power - 1.0) < 1e-10 && std::abs(mf_power - 1.0) < 1e-10;
        }
        check("precoders have unit total power", ok);
    }

    return check.all_passed;
}

void print_mse_oracle_table(const ScenarioConfig& config, std::ostream& out)
{
    validate_config(config);

    ScenarioConfig cfg = config;
    cfg.estimators = {Estimator::LS, Estimator::LMMSE};
    cfg.precoders = {Precoder::ZF};

    // Monte-Carlo side: reuse the sweep machinery.
    const SweepResult sweep = run_power_sweep(cfg);

    // Analytic side: average the closed forms over the same covariance draws.
    Rng pilot_rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(SeedStream::Pilot)}));
    const PilotMatrix pilots =
        make_pilot_matrix(cfg.num_antennas, cfg.num_pilots, cfg.pilot_kind, pilot_rng);

    std::vector<ChannelCovariance> covariances;
    if (const auto* umi = std::get_if<UmiModelParams>(&cfg.channel))
    {
        const SteeringParams steer{cfg.num_antennas, cfg.antenna_spacing};
        for (std::size_t c = 0; c < cfg.n_cov; ++c)
        {
            Rng rng(derive_seed(cfg.master_seed,
                                {static_cast<std::uint64_t>(SeedStream::Covariance), c}));
            for (arma::uword k = 0; k < cfg.num_users; ++k)
                covariances.push_back(build_umi_covariance(*umi, steer, rng));
        }
    }
    else if (const auto* scaled = std::get_if<ScaledIdentityModel>(&cfg.channel))
    {
        covariances.push_back(build_scaled_identity(scaled->c, cfg.num_antennas));
    }
    else
    {
        covariances.push_back(
            load_covariance_file(std::get<CovarianceFileModel>(cfg.channel).path));
    }

    out << "power_db     ls_closed       ls_mc           lmmse_closed    lmmse_mc\n";
    for (const double power_db : cfg.power_grid_db)
    {
        const double p_dl = db_to_linear(power_db);
        std::optional<double> p_fb;
        if (cfg.feedback_power_db)
            p_fb = db_to_linear(*cfg.feedback_power_db);
        const double sigma2 =
            cfg.noiseless_training ? 0.0 : effective_noise_variance(p_dl, p_fb);

        double ls_closed = 0.0, lmmse_closed = 0.0;
        for (const auto& cov : covariances)
        {
            ls_closed += mse_closed_form_ls(pilots, cov, sigma2);
            lmmse_closed += mse_closed_form_lmmse(pilots, cov, sigma2);
        }
        ls_closed /= static_cast<double>(covariances.size());
        lmmse_closed /= static_cast<double>(covariances.size());

        double ls_mc = 0.0, lmmse_mc = 0.0;
        for (const auto& row : sweep.rows)
        {
            if (row.power_db != power_db || row.metric != MetricKind::Mse)
                continue;
            if (row.estimator == Estimator::LS)
                ls_mc = row.mean;
            else if (row.estimator == Estimator::LMMSE)
                lmmse_mc = row.mean;
        }

        char line[160];
        std::snprintf(line, sizeof(line), "%8.6g  %-14.8g  %-14.8g  %-14.8g  %-14.8g\n", power_db,
                      ls_closed, ls_mc, lmmse_closed, lmmse_mc);
        out << line;
    }
}

} // namespace misosim
