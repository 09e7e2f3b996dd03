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

#include "misosim/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "misosim/errors.hpp"

namespace misosim
{

namespace
{

constexpr double kFactorizeTol = 1e-12;

std::uint64_t power_bits(double power_db)
{
    return std::bit_cast<std::uint64_t>(power_db);
}

// Second-order statistics of all K users for one covariance realization.
struct CovarianceContext
{
    std::vector<ChannelCovariance> covariances;
    std::vector<CovarianceFactor> factors;
};

CovarianceContext make_covariance_context(const ScenarioConfig& cfg, std::size_t cov_index,
                                          const ChannelCovariance* preloaded)
{
    CovarianceContext ctx;
    ctx.covariances.reserve(cfg.num_users);

    if (const auto* umi = std::get_if<UmiModelParams>(&cfg.channel))
    {
        Rng rng(derive_seed(cfg.master_seed,
                            {static_cast<std::uint64_t>(SeedStream::Covariance), cov_index}));
        const SteeringParams steer{cfg.num_antennas, cfg.antenna_spacing};
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            ctx.covariances.push_back(build_umi_covariance(*umi, steer, rng));
    }
    else if (const auto* scaled = std::get_if<ScaledIdentityModel>(&cfg.channel))
    {
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            ctx.covariances.push_back(build_scaled_identity(scaled->c, cfg.num_antennas));
    }
    else
    {
        const auto& file = std::get<CovarianceFileModel>(cfg.channel);
        const ChannelCovariance cov = preloaded ? *preloaded : load_covariance_file(file.path);
        if (cov.dim() != cfg.num_antennas)
            throw ValidationError("covariance file dimension does not match M");
        for (arma::uword k = 0; k < cfg.num_users; ++k)
            ctx.covariances.push_back(cov);
    }

    ctx.factors.reserve(cfg.num_users);
    for (const auto& cov : ctx.covariances)
        ctx.factors.push_back(factorize(cov, kFactorizeTol));
    return ctx;
}

// Everything that depends on the transmit power but not on the channel draw.
struct PowerContext
{
    double power_db = 0.0;
    double sigma2_train = 0.0;
    double sigma2_data = 0.0;
    bool lmmse_enabled = false;
    bool lmmse_ok = true;                    // false if the noiseless filter is singular
    std::vector<arma::cx_mat> lmmse_filters; // one per user
};

PowerContext make_power_context(const ScenarioConfig& cfg, const PilotMatrix& pilots,
                                const CovarianceContext& ctx, double power_db)
{
    PowerContext pc;
    pc.power_db = power_db;
    const double p_dl = db_to_linear(power_db);
    std::optional<double> p_fb;
    if (cfg.feedback_power_db)
        p_fb = db_to_linear(*cfg.feedback_power_db);
    pc.sigma2_train = cfg.noiseless_training ? 0.0 : effective_noise_variance(p_dl, p_fb);
    pc.sigma2_data = 1.0 / p_dl;

    pc.lmmse_enabled = std::find(cfg.estimators.begin(), cfg.estimators.end(),
                                 Estimator::LMMSE) != cfg.estimators.end();
    if (pc.lmmse_enabled)
    {
        pc.lmmse_filters.reserve(cfg.num_users);
        try
        {
            for (const auto& cov : ctx.covariances)
                pc.lmmse_filters.push_back(lmmse_filter(pilots, cov, pc.sigma2_train));
        }
        catch (const SingularPilotGram&)
        {
            // Only reachable in the noiseless override; recorded per trial.
            pc.lmmse_ok = false;
            pc.lmmse_filters.clear();
        }
    }
    return pc;
}

PilotMatrix make_scenario_pilots(const ScenarioConfig& cfg)
{
    Rng rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(SeedStream::Pilot)}));
    return make_pilot_matrix(cfg.num_antennas, cfg.num_pilots, cfg.pilot_kind, rng);
}

arma::cx_mat draw_channels(const ScenarioConfig& cfg, const CovarianceContext& ctx,
                           std::size_t cov_index, std::size_t ch_index)
{
    Rng rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(SeedStream::Channel),
                                          cov_index, ch_index}));
    arma::cx_mat h(cfg.num_antennas, cfg.num_users);
    for (arma::uword k = 0; k < cfg.num_users; ++k)
        h.col(k) = sample_channel(ctx.factors[k], ctx.covariances[k].mean, rng);
    return h;
}

TrialResult evaluate_trial(const ScenarioConfig& cfg, const PilotMatrix& pilots,
                           const CovarianceContext& ctx, const PowerContext& pc,
                           const arma::cx_mat& h_true, std::size_t cov_index,
                           std::size_t ch_index)
{
    Rng noise_rng(derive_seed(cfg.master_seed,
                              {static_cast<std::uint64_t>(SeedStream::TrainingNoise),
                               power_bits(pc.power_db), cov_index, ch_index}));

    std::vector<TrainingObservation> obs;
    obs.reserve(cfg.num_users);
    for (arma::uword k = 0; k < cfg.num_users; ++k)
        obs.push_back(observe(pilots, h_true.col(k), pc.sigma2_train, noise_rng));

    TrialResult result;
    for (const Estimator estimator : cfg.estimators)
    {
        bool estimate_ok = true;
        arma::cx_mat h_hat(cfg.num_antennas, cfg.num_users);
        double mse_sum = 0.0;

        for (arma::uword k = 0; k < cfg.num_users; ++k)
        {
            ChannelEstimate est;
            switch (estimator)
            {
            case Estimator::LS:
                est = estimate_ls(pilots, obs[k]);
                break;
            case Estimator::LMMSE:
                if (!pc.lmmse_ok)
                {
                    estimate_ok = false;
                    break;
                }
                est = apply_lmmse_filter(pc.lmmse_filters[k], pilots, ctx.covariances[k], obs[k]);
                break;
            case Estimator::Genie:
                est = genie_estimate(h_true.col(k));
                break;
            default:
                throw ValidationError("unsupported estimator in scenario");
            }
            if (!estimate_ok)
                break;
            h_hat.col(k) = est.h_hat;
            mse_sum += mse_sample(h_true.col(k), est);
        }

        result.mse.emplace_back(estimator,
                                estimate_ok ? mse_sum / static_cast<double>(cfg.num_users)
                                            : std::numeric_limits<double>::quiet_NaN());

        for (const Precoder precoder : cfg.precoders)
        {
            TrialComboOutcome combo;
            combo.estimator = estimator;
            combo.precoder = precoder;
            if (!estimate_ok)
            {
                combo.failed = true;
            }
            else
            {
                try
                {
                    const PrecodingMatrix p = precoder == Precoder::ZF
                                                  ? zf_precoder(EstimatedChannelMatrix(h_hat))
                                                  : mf_precoder(EstimatedChannelMatrix(h_hat));
                    combo.sum_rate = rates(h_true, p, pc.sigma2_data, cfg.num_pilots,
                                           cfg.coherence_length)
                                         .sum_rate;
                }
                catch (const RankDeficient&)
                {
                    combo.failed = true;
                }
                catch (const ZeroMatrix&)
                {
                    combo.failed = true;
                }
            }
            result.combos.push_back(combo);
        }
    }
    return result;
}

// Flat per-trial value store for one sweep; filled by the workers in
// disjoint slots and reduced once, in trial order.
struct SweepStore
{
    std::size_t n_powers = 0, n_est = 0, n_prec = 0, n_trials = 0;
    std::vector<double> rate;      // [power][est][prec][trial]
    std::vector<std::uint8_t> fail;
    std::vector<double> mse;       // [power][est][trial]

    std::size_t rate_index(std::size_t p, std::size_t e, std::size_t r, std::size_t t) const
    {
        return ((p * n_est + e) * n_prec + r) * n_trials + t;
    }
    std::size_t mse_index(std::size_t p, std::size_t e, std::size_t t) const
    {
        return (p * n_est + e) * n_trials + t;
    }
};

struct MeanStderr
{
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t n = 0;
};

// Two-pass mean and standard error; NaN entries (failed estimates) are
// excluded and reduce the sample count.
MeanStderr reduce(const double* values, std::size_t n)
{
    MeanStderr out;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (std::isnan(values[i]))
            continue;
        sum += values[i];
        ++out.n;
    }
    if (out.n == 0)
        return out;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n > 1)
    {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (std::isnan(values[i]))
                continue;
            const double d = values[i] - out.mean;
            ss += d * d;
        }
        out.standard_error =
            std::sqrt(ss / (static_cast<double>(out.n - 1) * static_cast<double>(out.n)));
    }
    return out;
}

bool row_less(const SweepRow& a, const SweepRow& b)
{
    if (a.power_db != b.power_db)
        return a.power_db < b.power_db;
    const int est = std::string_view(estimator_name(a.estimator))
                        .compare(estimator_name(b.estimator));
    if (est != 0)
        return est < 0;
    const int prec =
        std::string_view(precoder_name(a.precoder)).compare(precoder_name(b.precoder));
    if (prec != 0)
        return prec < 0;
    return std::string_view(metric_name(a.metric)).compare(metric_name(b.metric)) < 0;
}

void format_double(std::string& out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    out += buf;
}

} // namespace

const char* metric_name(MetricKind metric)
{
    switch (metric)
    {
    case MetricKind::Mse:
        return "mse";
    case MetricKind::SumRate:
        return "sum_rate";
    }
    return "?";
}

TrialResult run_trial(const ScenarioConfig& cfg, double power_db, std::size_t trial_index)
{
    validate_config(cfg);
    const std::size_t cov_index = trial_index / cfg.n_ch;
    const std::size_t ch_index = trial_index % cfg.n_ch;

    const PilotMatrix pilots = make_scenario_pilots(cfg);
    const CovarianceContext ctx = make_covariance_context(cfg, cov_index, nullptr);
    const PowerContext pc = make_power_context(cfg, pilots, ctx, power_db);
    const arma::cx_mat h_true = draw_channels(cfg, ctx, cov_index, ch_index);
    return evaluate_trial(cfg, pilots, ctx, pc, h_true, cov_index, ch_index);
}

SweepResult run_power_sweep(const ScenarioConfig& cfg, unsigned num_workers)
{
    validate_config(cfg);

    const PilotMatrix pilots = make_scenario_pilots(cfg);

    // Load a file-backed covariance once, not per realization.
    std::unique_ptr<ChannelCovariance> preloaded;
    if (const auto* file = std::get_if<CovarianceFileModel>(&cfg.channel))
        preloaded = std::make_unique<ChannelCovariance>(load_covariance_file(file->path));

    SweepStore store;
    store.n_powers = cfg.power_grid_db.size();
    store.n_est = cfg.estimators.size();
    store.n_prec = cfg.precoders.size();
    store.n_trials = cfg.n_cov * cfg.n_ch;
    store.rate.assign(store.n_powers * store.n_est * store.n_prec * store.n_trials, 0.0);
    store.fail.assign(store.rate.size(), 0);
    store.mse.assign(store.n_powers * store.n_est * store.n_trials, 0.0);

    if (num_workers == 0)
        num_workers = std::max(1u, std::thread::hardware_concurrency());
    num_workers = static_cast<unsigned>(
        std::min<std::size_t>(num_workers, static_cast<std::size_t>(cfg.n_cov)));

    const auto process_cov = [&](std::size_t cov_index) {
        const CovarianceContext ctx = make_covariance_context(cfg, cov_index, preloaded.get());

        // Channel draws do not depend on the power point, draw them once.
        std::vector<arma::cx_mat> channels;
        channels.reserve(cfg.n_ch);
        for (std::size_t ch = 0; ch < cfg.n_ch; ++ch)
            channels.push_back(draw_channels(cfg, ctx, cov_index, ch));

        for (std::size_t p = 0; p < store.n_powers; ++p)
        {
            const PowerContext pc = make_power_context(cfg, pilots, ctx, cfg.power_grid_db[p]);
            for (std::size_t ch = 0; ch < cfg.n_ch; ++ch)
            {
                const std::size_t trial = cov_index * cfg.n_ch + ch;
                const TrialResult tr =
                    evaluate_trial(cfg, pilots, ctx, pc, channels[ch], cov_index, ch);

                std::size_t combo = 0;
                for (std::size_t e = 0; e < store.n_est; ++e)
                {
                    store.mse[store.mse_index(p, e, trial)] = tr.mse[e].second;
                    for (std::size_t r = 0; r < store.n_prec; ++r, ++combo)
                    {
                        const std::size_t idx = store.rate_index(p, e, r, trial);
                        store.rate[idx] = tr.combos[combo].sum_rate;
                        store.fail[idx] = tr.combos[combo].failed ? 1 : 0;
                    }
                }
            }
        }
    };

    if (num_workers <= 1)
    {
        for (std::size_t c = 0; c < cfg.n_cov; ++c)
            process_cov(c);
    }
    else
    {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(num_workers);
        for (unsigned w = 0; w < num_workers; ++w)
        {
            pool.emplace_back([&, w]() {
                try
                {
                    for (std::size_t c = w; c < cfg.n_cov; c += num_workers)
                        process_cov(c);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        for (const auto& err : errors)
            if (err)
                std::rethrow_exception(err);
    }

    SweepResult result;
    for (std::size_t p = 0; p < store.n_powers; ++p)
    {
        const double power_db = cfg.power_grid_db[p];
        for (std::size_t e = 0; e < store.n_est; ++e)
        {
            const MeanStderr mse =
                reduce(&store.mse[store.mse_index(p, e, 0)], store.n_trials);
            for (std::size_t r = 0; r < store.n_prec; ++r)
            {
                const double* rate_vals = &store.rate[store.rate_index(p, e, r, 0)];
                const MeanStderr rate = reduce(rate_vals, store.n_trials);

                result.rows.push_back(SweepRow{power_db, cfg.estimators[e], cfg.precoders[r],
                                               MetricKind::Mse, mse.mean, mse.standard_error,
                                               mse.n});
                result.rows.push_back(SweepRow{power_db, cfg.estimators[e], cfg.precoders[r],
                                               MetricKind::SumRate, rate.mean,
                                               rate.standard_error, rate.n});

                std::size_t failures = 0;
                const std::uint8_t* fail_vals = &store.fail[store.rate_index(p, e, r, 0)];
                for (std::size_t t = 0; t < store.n_trials; ++t)
                    failures += fail_vals[t];
                result.diagnostics.push_back(DiagnosticsRow{power_db, cfg.estimators[e],
                                                            cfg.precoders[r], failures,
                                                            store.n_trials});
            }
        }
    }

    std::sort(result.rows.begin(), result.rows.end(), row_less);
    std::sort(result.diagnostics.begin(), result.diagnostics.end(),
              [](const DiagnosticsRow& a, const DiagnosticsRow& b) {
                  const SweepRow ra{a.power_db, a.estimator, a.precoder, MetricKind::Mse, 0, 0, 0};
                  const SweepRow rb{b.power_db, b.estimator, b.precoder, MetricKind::Mse, 0, 0, 0};
                  return row_less(ra, rb);
              });
    return result;
}

std::string csv_to_string(const SweepResult& result)
{
    std::string out = "power_db,estimator,precoder,metric,mean,stderr,n\n";
    for (const auto& row : result.rows)
    {
        format_double(out, row.power_db);
        out += ',';
        out += estimator_name(row.estimator);
        out += ',';
        out += precoder_name(row.precoder);
        out += ',';
        out += metric_name(row.metric);
        out += ',';
        format_double(out, row.mean);
        out += ',';
        format_double(out, row.standard_error);
        out += ',';
        out += std::to_string(row.n_samples);
        out += '\n';
    }
    return out;
}

void write_csv(const SweepResult& result, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << csv_to_string(result);
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

void write_diagnostics(const SweepResult& result, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << "power_db,estimator,precoder,failures,n\n";
    for (const auto& row : result.diagnostics)
    {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.15g", row.power_db);
        out << buf << ',' << estimator_name(row.estimator) << ',' << precoder_name(row.precoder)
            << ',' << row.failures << ',' << row.n_trials << '\n';
    }
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

} // namespace misosim
