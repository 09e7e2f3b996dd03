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

#ifndef MISOSIM_METRICS_HPP
#define MISOSIM_METRICS_HPP

#include <armadillo>

#include "misosim/estimation.hpp"
#include "misosim/precoding.hpp"

namespace misosim
{

// Per-realization rate summary in bits per channel use; the pre-log factor
// charges the pilot overhead against the coherence interval.
struct RateBreakdown
{
    arma::vec per_user_sinr;
    arma::vec per_user_rate;
    double sum_rate = 0.0;
    double prelog = 0.0;
};

// SINR_k = |h_k^H p_k|^2 / (sum_{j != k} |h_k^H p_j|^2 + sigma2_data).
arma::vec sinr_per_user(const arma::cx_mat& h_true, const PrecodingMatrix& precoder,
                        double sigma2_data);

RateBreakdown rates(const arma::cx_mat& h_true, const PrecodingMatrix& precoder,
                    double sigma2_data, arma::uword num_pilots, arma::uword coherence_length);

// Squared Euclidean error of one estimate.
double mse_sample(const arma::cx_vec& h, const ChannelEstimate& estimate);

} // namespace misosim

#endif
