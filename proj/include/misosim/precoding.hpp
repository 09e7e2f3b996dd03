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

#ifndef MISOSIM_PRECODING_HPP
#define MISOSIM_PRECODING_HPP

#include <armadillo>
#include <string>
#include <vector>

#include "misosim/estimation.hpp"

namespace misosim
{

enum class Precoder
{
    ZF, // zero forcing via the pseudo-inverse of the estimated channel
    MF, // matched filter / maximum ratio transmission
};

const char* precoder_name(Precoder precoder);
Precoder precoder_from_name(const std::string& name);

// Per-user channel estimates stacked column-wise into an M x K matrix.
struct EstimatedChannelMatrix
{
    arma::cx_mat matrix;

    EstimatedChannelMatrix(arma::cx_mat m); // implicit on purpose
    static EstimatedChannelMatrix from_estimates(const std::vector<ChannelEstimate>& estimates);
};

// Unit total transmit power: trace(P P^H) = 1. The normalization scalar is
// kept because the effective channel of an exact nulling precoder equals
// normalization * I.
struct PrecodingMatrix
{
    arma::cx_mat matrix;
    double normalization = 0.0;
    Precoder scheme = Precoder::ZF;
};

// P = delta * Hhat (Hhat^H Hhat)^-1 with delta = 1/sqrt(trace((Hhat^H Hhat)^-1)).
// Throws RankDeficient when the Gram matrix condition number exceeds 1e12,
// e.g. for LS estimates with fewer pilots than users.
PrecodingMatrix zf_precoder(const EstimatedChannelMatrix& h_hat);

// P = Hhat / ||Hhat||_F.
PrecodingMatrix mf_precoder(const EstimatedChannelMatrix& h_hat);

// H^H P; entry (k, j) is the gain of beam j at user k, so off-diagonal
// entries are inter-user interference gains.
arma::cx_mat effective_channel(const arma::cx_mat& h_true, const PrecodingMatrix& precoder);

} // namespace misosim

#endif
