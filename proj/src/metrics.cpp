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

#include "misosim/metrics.hpp"

#include "misosim/errors.hpp"

namespace misosim
{

arma::vec sinr_per_user(const arma::cx_mat& h_true, const PrecodingMatrix& precoder,
                        double sigma2_data)
{
    if (sigma2_data <= 0.0)
        throw std::invalid_argument("sinr_per_user: sigma2_data must be > 0");
    if (h_true.n_cols != precoder.matrix.n_cols)
        throw DimensionMismatch("sinr_per_user: precoder must have one beam per user");

    const arma::mat gains = arma::square(arma::abs(effective_channel(h_true, precoder)));
    const arma::uword k = gains.n_rows;
    arma::vec sinr(k);
    for (arma::uword u = 0; u < k; ++u)
    {
        const double desired = gains(u, u);
        const double interference = arma::accu(gains.row(u)) - desired;
        sinr(u) = desired / (interference + sigma2_data);
    }
    return sinr;
}

RateBreakdown rates(const arma::cx_mat& h_true, const PrecodingMatrix& precoder,
                    double sigma2_data, arma::uword num_pilots, arma::uword coherence_length)
{
    if (num_pilots >= coherence_length)
        throw InvalidPrelog("rates: prelog requires T_dl < T_coh");

    RateBreakdown out;
    out.prelog =
        1.0 - static_cast<double>(num_pilots) / static_cast<double>(coherence_length);
    out.per_user_sinr = sinr_per_user(h_true, precoder, sigma2_data);
    out.per_user_rate = out.prelog * arma::log2(1.0 + out.per_user_sinr);
    out.sum_rate = arma::accu(out.per_user_rate);
    return out;
}

double mse_sample(const arma::cx_vec& h, const ChannelEstimate& estimate)
{
    if (h.n_elem != estimate.h_hat.n_elem)
        throw DimensionMismatch("mse_sample: vectors must have equal length");
    const arma::cx_vec diff = h - estimate.h_hat;
    return std::real(arma::cdot(diff, diff));
}

} // namespace misosim
