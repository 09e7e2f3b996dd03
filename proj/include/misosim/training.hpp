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

#ifndef MISOSIM_TRAINING_HPP
#define MISOSIM_TRAINING_HPP

#include <armadillo>
#include <optional>
#include <string>

#include "misosim/rng.hpp"

namespace misosim
{

enum class PilotKind
{
    DftSubset,         // first T columns of the M-point unitary DFT matrix
    RandomSemiUnitary, // orthonormalized columns of an i.i.d. complex Gaussian matrix
    IdentitySubset,    // first T canonical basis vectors
};

const char* pilot_kind_name(PilotKind kind);
PilotKind pilot_kind_from_name(const std::string& name);

// M x T matrix with orthonormal columns; T < M leaves Phi*Phi^H a rank-T
// projector, which is the contamination mechanism studied here.
struct PilotMatrix
{
    arma::cx_mat matrix;
    PilotKind kind = PilotKind::DftSubset;

    arma::uword num_antennas() const
    {
        return matrix.n_rows;
    }
    arma::uword num_pilots() const
    {
        return matrix.n_cols;
    }
};

struct TrainingObservation
{
    arma::cx_vec y;
    double noise_variance = 0.0;
};

PilotMatrix make_pilot_matrix(arma::uword num_antennas, arma::uword num_pilots, PilotKind kind,
                              Rng& rng);

// 1/P_dl, plus 1/P_fb when the feedback link is noisy. Powers are linear.
double effective_noise_variance(double p_dl, std::optional<double> p_fb = std::nullopt);

// y = Phi^H h + n with n ~ CN(0, sigma2 I). sigma2 = 0 is exact and does not
// touch the generator.
TrainingObservation observe(const PilotMatrix& pilots, const arma::cx_vec& h, double sigma2,
                            Rng& rng);

} // namespace misosim

#endif
