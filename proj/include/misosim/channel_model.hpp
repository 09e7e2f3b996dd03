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

#ifndef MISOSIM_CHANNEL_MODEL_HPP
#define MISOSIM_CHANNEL_MODEL_HPP

#include <armadillo>
#include <string>

#include "misosim/rng.hpp"

namespace misosim
{

// Uniform linear array geometry. The carrier frequency is folded into the
// electrical antenna spacing (in wavelengths), so no frequency parameter
// appears anywhere else.
struct SteeringParams
{
    arma::uword num_antennas = 32;
    double spacing = 0.5; // in wavelengths
};

enum class PathlossMode
{
    UnitTrace,     // trace(C) = M, SNR controlled by the transmit power alone
    DistanceBased, // user dropped uniformly in a disc cell, pathloss vs cell edge
};

// Multipath cluster model: num_paths clusters of num_rays rays each, cluster
// centers uniform over the azimuth range, ray angles Gaussian around the
// center, cluster powers decaying exponentially.
struct UmiModelParams
{
    arma::uword num_paths = 6;
    arma::uword num_rays = 20;
    double cluster_power_decay = 0.5;                      // zeta_n ~ exp(-n * decay)
    double per_cluster_angle_spread = arma::datum::pi / 90; // std dev, radians (2 degrees)
    double azimuth_min = -arma::datum::pi / 2;
    double azimuth_max = arma::datum::pi / 2;
    PathlossMode pathloss = PathlossMode::UnitTrace;
    double pathloss_exponent = 3.7;
    double cell_radius_m = 250.0;
};

// Hermitian PSD second-order channel statistics, with an optional mean.
// An empty mean vector stands for the zero vector.
struct ChannelCovariance
{
    arma::cx_mat matrix;
    arma::cx_vec mean;

    arma::uword dim() const
    {
        return matrix.n_rows;
    }
    arma::cx_vec mean_or_zero() const
    {
        return mean.is_empty() ? arma::cx_vec(matrix.n_rows, arma::fill::zeros) : mean;
    }
};

// Square-root factor L with C = L * L^H, rank = number of retained
// eigenvalues. Used for sampling; kept separate from the covariance because
// the model covariances are deliberately rank-deficient.
struct CovarianceFactor
{
    arma::cx_mat factor; // M x rank

    arma::uword rank() const
    {
        return factor.n_cols;
    }
};

// Array steering vector, entry m = exp(i * 2*pi * spacing * m * sin(theta)).
arma::cx_vec steering_vector(double theta, const SteeringParams& params);

// Deterministic core of the multipath model: C = sum_r w_r a(theta_r) a(theta_r)^H,
// exactly Hermitian by construction. Weights must be nonnegative.
ChannelCovariance covariance_from_rays(const arma::vec& weights, const arma::vec& angles,
                                       const SteeringParams& params);

ChannelCovariance build_umi_covariance(const UmiModelParams& params, const SteeringParams& steer,
                                       Rng& rng);

ChannelCovariance build_scaled_identity(double c, arma::uword num_antennas);

// Eigendecomposition-based factorization. Eigenvalues above rel_tol * lambda_max
// are retained; values in [-1e-10 * lambda_max, 0) are clamped to zero; anything
// more negative is rejected.
CovarianceFactor factorize(const ChannelCovariance& cov, double rel_tol);

// h = mean + L g with g ~ CN(0, I_rank).
arma::cx_vec sample_channel(const CovarianceFactor& factor, const arma::cx_vec& mean, Rng& rng);

// Dense complex matrix import, one row per line, entries like "1.5+0.25i"
// separated by whitespace. Must be square and Hermitian.
ChannelCovariance load_covariance_file(const std::string& path);

// Throws NonHermitian if the stored matrix is not Hermitian within tolerance.
void check_covariance(const ChannelCovariance& cov);

} // namespace misosim

#endif
