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

#include "misosim/channel_model.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "misosim/errors.hpp"

namespace misosim
{

namespace
{

// Minimum BS-user distance for the disc cell drop, in meters. Keeps the
// pathloss bounded for users dropped next to the mast.
constexpr double kMinUserDistanceM = 10.0;

double hermitian_deviation(const arma::cx_mat& c)
{
    return arma::abs(c - c.t()).max();
}

} // namespace

arma::cx_vec steering_vector(double theta, const SteeringParams& params)
{
    if (params.num_antennas < 1)
        throw InvalidDimensions("steering_vector: num_antennas must be >= 1");
    if (params.spacing <= 0.0)
        throw std::invalid_argument("steering_vector: spacing must be > 0");
    if (!std::isfinite(theta))
        throw std::invalid_argument("steering_vector: theta must be finite");

    const double phase_step = 2.0 * arma::datum::pi * params.spacing * std::sin(theta);
    arma::cx_vec a(params.num_antennas);
    for (arma::uword m = 0; m < params.num_antennas; ++m)
        a(m) = std::polar(1.0, phase_step * static_cast<double>(m));
    return a;
}

ChannelCovariance covariance_from_rays(const arma::vec& weights, const arma::vec& angles,
                                       const SteeringParams& params)
{
    if (weights.n_elem != angles.n_elem)
        throw DimensionMismatch("covariance_from_rays: weights and angles must have equal length");
    if (weights.n_elem == 0)
        throw InvalidDimensions("covariance_from_rays: at least one ray required");
    if (weights.min() < 0.0)
        throw std::invalid_argument("covariance_from_rays: weights must be nonnegative");

    const arma::uword m = params.num_antennas;
    arma::cx_mat c(m, m, arma::fill::zeros);
    for (arma::uword r = 0; r < weights.n_elem; ++r)
    {
        const arma::cx_vec a = steering_vector(angles(r), params);
        c += weights(r) * (a * a.t());
    }
    c = 0.5 * (c + c.t()); // remove accumulation round-off, exactly Hermitian
    return ChannelCovariance{std::move(c), arma::cx_vec()};
}

ChannelCovariance build_umi_covariance(const UmiModelParams& params, const SteeringParams& steer,
                                       Rng& rng)
{
    if (params.num_paths < 1 || params.num_rays < 1)
        throw InvalidDimensions("build_umi_covariance: num_paths and num_rays must be >= 1");
    if (params.cluster_power_decay < 0.0)
        throw std::invalid_argument("build_umi_covariance: cluster_power_decay must be >= 0");
    if (params.per_cluster_angle_spread <= 0.0)
        throw std::invalid_argument("build_umi_covariance: per_cluster_angle_spread must be > 0");
    if (params.azimuth_min >= params.azimuth_max ||
        params.azimuth_min < -arma::datum::pi / 2 - 1e-12 ||
        params.azimuth_max > arma::datum::pi / 2 + 1e-12)
        throw std::invalid_argument(
            "build_umi_covariance: azimuth range must be a subinterval of [-pi/2, pi/2]");

    // Pathloss scale first so the angle draws are unaffected by the mode.
    double eta = 1.0;
    if (params.pathloss == PathlossMode::DistanceBased)
    {
        if (params.cell_radius_m <= kMinUserDistanceM)
            throw std::invalid_argument("build_umi_covariance: cell radius too small");
        const double dist =
            std::max(kMinUserDistanceM, params.cell_radius_m * std::sqrt(rng.uniform()));
        eta = std::pow(dist / params.cell_radius_m, -params.pathloss_exponent);
    }

    // Cluster powers, exponential profile normalized to sum to one.
    arma::vec cluster_power(params.num_paths);
    for (arma::uword n = 0; n < params.num_paths; ++n)
        cluster_power(n) = std::exp(-params.cluster_power_decay * static_cast<double>(n));
    cluster_power /= arma::accu(cluster_power);

    arma::vec centers(params.num_paths);
    for (arma::uword n = 0; n < params.num_paths; ++n)
        centers(n) = rng.uniform(params.azimuth_min, params.azimuth_max);

    const arma::uword total = params.num_paths * params.num_rays;
    arma::vec weights(total);
    arma::vec angles(total);
    arma::uword r = 0;
    for (arma::uword n = 0; n < params.num_paths; ++n)
    {
        const arma::vec offsets = rng.normal_vec(params.num_rays) * params.per_cluster_angle_spread;
        for (arma::uword k = 0; k < params.num_rays; ++k, ++r)
        {
            weights(r) = cluster_power(n) / static_cast<double>(params.num_rays);
            angles(r) = centers(n) + offsets(k);
        }
    }

    ChannelCovariance cov = covariance_from_rays(weights, angles, steer);

    // Rescale so trace(C) = eta * M exactly; the ray sum already lands there
    // up to round-off because the steering diagonals are all ones.
    const double tr = arma::accu(arma::real(cov.matrix.diag()));
    if (tr <= 0.0)
        throw NotPositiveSemidefinite("build_umi_covariance: nonpositive trace");
    cov.matrix *= eta * static_cast<double>(steer.num_antennas) / tr;
    return cov;
}

ChannelCovariance build_scaled_identity(double c, arma::uword num_antennas)
{
    if (c <= 0.0)
        throw std::invalid_argument("build_scaled_identity: c must be > 0");
    if (num_antennas < 1)
        throw InvalidDimensions("build_scaled_identity: num_antennas must be >= 1");
    arma::cx_mat m(num_antennas, num_antennas, arma::fill::zeros);
    m.diag().fill(arma::cx_double(c, 0.0));
    return ChannelCovariance{std::move(m), arma::cx_vec()};
}

void check_covariance(const ChannelCovariance& cov)
{
    if (cov.matrix.n_rows != cov.matrix.n_cols)
        throw DimensionMismatch("covariance matrix must be square");
    if (!cov.mean.is_empty() && cov.mean.n_elem != cov.matrix.n_rows)
        throw DimensionMismatch("covariance mean length must match the matrix dimension");
    const double scale = std::max(arma::abs(cov.matrix).max(), 1e-300);
    if (hermitian_deviation(cov.matrix) > 1e-10 * scale)
        throw NonHermitian("covariance matrix is not Hermitian within tolerance");
}

CovarianceFactor factorize(const ChannelCovariance& cov, double rel_tol)
{
    check_covariance(cov);

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, cov.matrix))
        throw std::runtime_error("factorize: eigendecomposition failed");

    const double lambda_max = eigval.n_elem ? eigval.max() : 0.0;
    if (lambda_max < 0.0)
        throw NotPositiveSemidefinite("factorize: all eigenvalues negative");

    const double neg_tol = 1e-10 * std::max(lambda_max, 0.0);
    for (arma::uword i = 0; i < eigval.n_elem; ++i)
    {
        if (eigval(i) < -neg_tol)
            throw NotPositiveSemidefinite("factorize: eigenvalue below the PSD tolerance");
        if (eigval(i) < 0.0)
            eigval(i) = 0.0;
    }

    // eig_sym returns ascending order; retain the significant tail, largest first.
    const double cutoff = rel_tol * lambda_max;
    std::vector<arma::uword> keep;
    for (arma::uword i = eigval.n_elem; i-- > 0;)
        if (eigval(i) > cutoff)
            keep.push_back(i);

    arma::cx_mat factor(cov.matrix.n_rows, keep.size());
    for (arma::uword j = 0; j < keep.size(); ++j)
        factor.col(j) = eigvec.col(keep[j]) * std::sqrt(eigval(keep[j]));
    return CovarianceFactor{std::move(factor)};
}

arma::cx_vec sample_channel(const CovarianceFactor& factor, const arma::cx_vec& mean, Rng& rng)
{
    if (!mean.is_empty() && mean.n_elem != factor.factor.n_rows)
        throw DimensionMismatch("sample_channel: mean length must match the factor rows");

    arma::cx_vec h = mean.is_empty() ? arma::cx_vec(factor.factor.n_rows, arma::fill::zeros)
                                     : arma::cx_vec(mean);
    if (factor.rank() > 0)
        h += factor.factor * rng.complex_normal_vec(factor.rank());
    return h;
}

namespace
{

// Parses one complex token of the form "a", "bi", "a+bi" or "a-bi".
arma::cx_double parse_complex_token(const std::string& tok, arma::uword line_no)
{
    const auto fail = [&]() -> arma::cx_double {
        throw ParseError("covariance file line " + std::to_string(line_no) +
                         ": malformed complex entry '" + tok + "'");
    };

    if (tok.empty())
        return fail();

    std::string body = tok;
    bool imag_only = false;
    if (body.back() == 'i' || body.back() == 'j')
    {
        body.pop_back();
        imag_only = true;
    }

    // Find the sign that separates real and imaginary parts, skipping any
    // exponent signs ("1e-3+2e+4i").
    std::size_t split = std::string::npos;
    for (std::size_t p = 1; p < body.size(); ++p)
    {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E')
            split = p;
    }

    try
    {
        std::size_t used = 0;
        if (split == std::string::npos)
        {
            const double v = std::stod(body, &used);
            if (used != body.size())
                return fail();
            return imag_only ? arma::cx_double(0.0, v) : arma::cx_double(v, 0.0);
        }
        if (!imag_only)
            return fail(); // two components require the trailing 'i'
        const std::string re_part = body.substr(0, split);
        const std::string im_part = body.substr(split);
        const double re = std::stod(re_part, &used);
        if (used != re_part.size())
            return fail();
        const double im = im_part == "+" ? 1.0 : im_part == "-" ? -1.0 : std::stod(im_part, &used);
        if (im_part != "+" && im_part != "-" && used != im_part.size())
            return fail();
        return arma::cx_double(re, im);
    }
    catch (const std::logic_error&)
    {
        return fail();
    }
}

} // namespace

ChannelCovariance load_covariance_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open covariance file '" + path + "'");

    std::vector<std::vector<arma::cx_double>> rows;
    std::string line;
    arma::uword line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<arma::cx_double> row;
        std::string tok;
        while (ls >> tok)
            row.push_back(parse_complex_token(tok, line_no));
        if (!row.empty())
            rows.push_back(std::move(row));
    }

    if (rows.empty())
        throw ParseError("covariance file '" + path + "' contains no data");
    const arma::uword m = rows.size();
    arma::cx_mat c(m, m);
    for (arma::uword i = 0; i < m; ++i)
    {
        if (rows[i].size() != m)
            throw ParseError("covariance file '" + path + "': row " + std::to_string(i + 1) +
                             " has " + std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(m));
        for (arma::uword j = 0; j < m; ++j)
            c(i, j) = rows[i][j];
    }

    ChannelCovariance cov{std::move(c), arma::cx_vec()};
    check_covariance(cov);
    return cov;
}

} // namespace misosim
