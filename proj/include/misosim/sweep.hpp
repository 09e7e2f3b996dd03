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

#ifndef MISOSIM_SWEEP_HPP
#define MISOSIM_SWEEP_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "misosim/metrics.hpp"
#include "misosim/scenario.hpp"

namespace misosim
{

enum class MetricKind
{
    Mse,
    SumRate,
};

const char* metric_name(MetricKind metric);

struct SweepRow
{
    double power_db = 0.0;
    Estimator estimator = Estimator::LS;
    Precoder precoder = Precoder::ZF;
    MetricKind metric = MetricKind::SumRate;
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t n_samples = 0;
};

// Per-combination count of trials whose precoder could not be built
// (rank-deficient Gram, e.g. LS with T_dl < K). Failed trials enter the
// sum-rate mean as zero rate.
struct DiagnosticsRow
{
    double power_db = 0.0;
    Estimator estimator = Estimator::LS;
    Precoder precoder = Precoder::ZF;
    std::size_t failures = 0;
    std::size_t n_trials = 0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<DiagnosticsRow> diagnostics;
};

struct TrialComboOutcome
{
    Estimator estimator = Estimator::LS;
    Precoder precoder = Precoder::ZF;
    double sum_rate = 0.0;
    bool failed = false;
};

struct TrialResult
{
    std::vector<TrialComboOutcome> combos;                 // estimator-major, precoder-minor
    std::vector<std::pair<Estimator, double>> mse;         // NaN when the estimate failed
};

// One Monte-Carlo trial, a pure function of (master_seed, power_db,
// trial_index). trial_index enumerates (covariance draw, channel draw) pairs
// as cov * n_ch + ch.
TrialResult run_trial(const ScenarioConfig& config, double power_db, std::size_t trial_index);

// Full power sweep; trials are independent and merged in index order, so the
// result is identical for any worker count. num_workers = 0 picks the
// hardware concurrency.
SweepResult run_power_sweep(const ScenarioConfig& config, unsigned num_workers = 0);

std::string csv_to_string(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);
void write_diagnostics(const SweepResult& result, const std::string& path);

} // namespace misosim

#endif
