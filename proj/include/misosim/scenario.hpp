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

#ifndef MISOSIM_SCENARIO_HPP
#define MISOSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "misosim/channel_model.hpp"
#include "misosim/estimation.hpp"
#include "misosim/precoding.hpp"
#include "misosim/training.hpp"

namespace misosim
{

struct ScaledIdentityModel
{
    double c = 1.0;
};

struct CovarianceFileModel
{
    std::string path;
};

using ChannelModelSpec = std::variant<UmiModelParams, ScaledIdentityModel, CovarianceFileModel>;

// Full experiment description. Config files use the short key names below
// (M, K, T_dl, ...); nested channel parameters live under "channel.".
struct ScenarioConfig
{
    arma::uword num_antennas = 32;    // M
    arma::uword num_users = 5;        // K
    arma::uword num_pilots = 16;      // T_dl
    arma::uword coherence_length = 200; // T_coh

    std::vector<double> power_grid_db;
    std::optional<double> feedback_power_db;

    arma::uword n_cov = 100;
    arma::uword n_ch = 200;

    std::vector<Estimator> estimators{Estimator::LS, Estimator::LMMSE, Estimator::Genie};
    std::vector<Precoder> precoders{Precoder::ZF, Precoder::MF};

    PilotKind pilot_kind = PilotKind::DftSubset;
    ChannelModelSpec channel = UmiModelParams{};
    double antenna_spacing = 0.5;

    std::uint64_t master_seed = 1;

    // Forces sigma2 = 0 in the training phase; used to probe the asymptotic
    // regime directly.
    bool noiseless_training = false;
};

double db_to_linear(double db);

// Parses the key-value config text; throws ParseError with line diagnostics
// and ValidationError naming the violated invariant.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
void validate_config(const ScenarioConfig& config);

} // namespace misosim

#endif
