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

#ifndef MISOSIM_ESTIMATION_HPP
#define MISOSIM_ESTIMATION_HPP

#include <armadillo>
#include <string>

#include "misosim/channel_model.hpp"
#include "misosim/training.hpp"

namespace misosim
{

enum class Estimator
{
    LS,
    LMMSE,
    AsymptoticLS,
    AsymptoticLMMSE,
    Genie,
};

const char* estimator_name(Estimator estimator);
Estimator estimator_from_name(const std::string& name);

struct ChannelEstimate
{
    arma::cx_vec h_hat;
    Estimator estimator = Estimator::LS;
};

// h_hat = Phi y. No inversion needed thanks to Phi^H Phi = I.
ChannelEstimate estimate_ls(const PilotMatrix& pilots, const TrainingObservation& obs);

// h_hat = C Phi (Phi^H C Phi + sigma2 I)^-1 (y - Phi^H mu) + mu. Requires
// sigma2 > 0; the noiseless limit is asymptotic_lmmse.
ChannelEstimate estimate_lmmse(const PilotMatrix& pilots, const TrainingObservation& obs,
                               const ChannelCovariance& cov, double sigma2);

// Noiseless limits: projection onto the pilot space, and the covariance-weighted
// reconstruction through the pilot space.
ChannelEstimate asymptotic_ls(const PilotMatrix& pilots, const arma::cx_vec& h);
ChannelEstimate asymptotic_lmmse(const PilotMatrix& pilots, const arma::cx_vec& h,
                                 const ChannelCovariance& cov);

// Perfect-CSI baseline.
ChannelEstimate genie_estimate(const arma::cx_vec& h);

// Precomputable estimation filter W = C Phi (Phi^H C Phi + sigma2 I)^-1 and
// its application h_hat = W (y - Phi^H mu) + mu. sigma2 = 0 selects the
// noiseless pseudo-filter guarded by the pilot-Gram condition number.
arma::cx_mat lmmse_filter(const PilotMatrix& pilots, const ChannelCovariance& cov, double sigma2);
ChannelEstimate apply_lmmse_filter(const arma::cx_mat& filter, const PilotMatrix& pilots,
                                   const ChannelCovariance& cov, const TrainingObservation& obs);

// Analytic mean-square-error oracles for fixed (pilots, covariance, noise),
// averaged over channel and noise: the Monte-Carlo curves must match these.
double mse_closed_form_ls(const PilotMatrix& pilots, const ChannelCovariance& cov, double sigma2);
double mse_closed_form_lmmse(const PilotMatrix& pilots, const ChannelCovariance& cov,
                             double sigma2);

} // namespace misosim

#endif
