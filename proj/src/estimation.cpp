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

#include "misosim/estimation.hpp"

#include "misosim/errors.hpp"

namespace misosim
{

namespace
{

constexpr double kGramConditionLimit = 1e12;

void require_pilot_obs_match(const PilotMatrix& pilots, const TrainingObservation& obs)
{
    if (obs.y.n_elem != pilots.num_pilots())
        throw DimensionMismatch("observation length must equal the number of pilots");
}

void require_pilot_cov_match(const PilotMatrix& pilots, const ChannelCovariance& cov)
{
    if (cov.matrix.n_rows != pilots.num_antennas())
        throw DimensionMismatch("covariance dimension must equal the pilot rows");
}

// Inverse of a Hermitian PSD matrix through its spectral factorization, with
// a condition-number guard. Gram matrices here are small (T_dl or K sized).
arma::cx_mat guarded_hermitian_inverse(const arma::cx_mat& gram, const char* what)
{
    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, gram))
        throw SingularPilotGram(std::string(what) + ": eigendecomposition failed");

    const double lambda_max = eigval.max();
    const double lambda_min = eigval.min();
    if (lambda_max <= 0.0 || lambda_min <= lambda_max / kGramConditionLimit)
        throw SingularPilotGram(std::string(what) + ": Gram matrix numerically singular");

    return eigvec * arma::diagmat(1.0 / eigval) * eigvec.t();
}

} // namespace

const char* estimator_name(Estimator estimator)
{
    switch (estimator)
    {
    case Estimator::LS:
        return "LS";
    case Estimator::LMMSE:
        return "LMMSE";
    case Estimator::AsymptoticLS:
        return "AsymptoticLS";
    case Estimator::AsymptoticLMMSE:
        return "AsymptoticLMMSE";
    case Estimator::Genie:
        return "Genie";
    }
    return "?";
}

Estimator estimator_from_name(const std::string& name)
{
    if (name == "LS")
        return Estimator::LS;
    if (name == "LMMSE")
        return Estimator::LMMSE;
    if (name == "AsymptoticLS")
        return Estimator::AsymptoticLS;
    if (name == "AsymptoticLMMSE")
        return Estimator::AsymptoticLMMSE;
    if (name == "Genie")
        return Estimator::Genie;
    throw ParseError("unknown estimator '" + name + "'");
}

ChannelEstimate estimate_ls(const PilotMatrix& pilots, const TrainingObservation& obs)
{
    require_pilot_obs_match(pilots, obs);
    return ChannelEstimate{pilots.matrix * obs.y, Estimator::LS};
}

ChannelEstimate estimate_lmmse(const PilotMatrix& pilots, const TrainingObservation& obs,
                               const ChannelCovariance& cov, double sigma2)
{
    require_pilot_obs_match(pilots, obs);
    require_pilot_cov_match(pilots, cov);
    if (sigma2 <= 0.0)
        throw std::invalid_argument("estimate_lmmse: sigma2 must be > 0");

    const arma::cx_mat cphi = cov.matrix * pilots.matrix; // M x T
    arma::cx_mat gram = pilots.matrix.t() * cphi;         // T x T
    gram.diag() += sigma2;

    if (arma::rcond(gram) < 1e-14)
        throw SingularSystem("estimate_lmmse: regularized Gram system is numerically singular");

    arma::cx_vec rhs = obs.y;
    const bool has_mean = !cov.mean.is_empty();
    if (has_mean)
    {
        if (cov.mean.n_elem != pilots.num_antennas())
            throw DimensionMismatch("estimate_lmmse: mean length must equal the pilot rows");
        rhs -= pilots.matrix.t() * cov.mean;
    }

    arma::cx_vec x;
    if (!arma::solve(x, gram, rhs, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
        throw SingularSystem("estimate_lmmse: solve failed");

    arma::cx_vec h_hat = cphi * x;
    if (has_mean)
        h_hat += cov.mean;
    return ChannelEstimate{std::move(h_hat), Estimator::LMMSE};
}

ChannelEstimate asymptotic_ls(const PilotMatrix& pilots, const arma::cx_vec& h)
{
    if (h.n_elem != pilots.num_antennas())
        throw DimensionMismatch("asymptotic_ls: channel length must equal the pilot rows");
    return ChannelEstimate{pilots.matrix * (pilots.matrix.t() * h), Estimator::AsymptoticLS};
}

ChannelEstimate asymptotic_lmmse(const PilotMatrix& pilots, const arma::cx_vec& h,
                                 const ChannelCovariance& cov)
{
    if (h.n_elem != pilots.num_antennas())
        throw DimensionMismatch("asymptotic_lmmse: channel length must equal the pilot rows");
    const arma::cx_mat filter = lmmse_filter(pilots, cov, 0.0);

    arma::cx_vec centered = h;
    const bool has_mean = !cov.mean.is_empty();
    if (has_mean)
        centered -= cov.mean;
    arma::cx_vec h_hat = filter * (pilots.matrix.t() * centered);
    if (has_mean)
        h_hat += cov.mean;
    return ChannelEstimate{std::move(h_hat), Estimator::AsymptoticLMMSE};
}

ChannelEstimate genie_estimate(const arma::cx_vec& h)
{
    return ChannelEstimate{h, Estimator::Genie};
}

arma::cx_mat lmmse_filter(const PilotMatrix& pilots, const ChannelCovariance& cov, double sigma2)
{
    require_pilot_cov_match(pilots, cov);
    if (sigma2 < 0.0)
        throw std::invalid_argument("lmmse_filter: sigma2 must be >= 0");

    const arma::cx_mat cphi = cov.matrix * pilots.matrix; // M x T
    arma::cx_mat gram = pilots.matrix.t() * cphi;         // T x T

    if (sigma2 == 0.0)
        return cphi * guarded_hermitian_inverse(gram, "asymptotic LMMSE");

    gram.diag() += sigma2;
    arma::cx_mat x;
    if (!arma::solve(x, gram, cphi.t(), arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
        throw SingularSystem("lmmse_filter: solve failed");
    return x.t(); // (A^-1 (C Phi)^H)^H = C Phi A^-1, A Hermitian
}

ChannelEstimate apply_lmmse_filter(const arma::cx_mat& filter, const PilotMatrix& pilots,
                                   const ChannelCovariance& cov, const TrainingObservation& obs)
{
    require_pilot_obs_match(pilots, obs);
    if (filter.n_cols != pilots.num_pilots() || filter.n_rows != pilots.num_antennas())
        throw DimensionMismatch("apply_lmmse_filter: filter shape must be M x T_dl");

    arma::cx_vec rhs = obs.y;
    const bool has_mean = !cov.mean.is_empty();
    if (has_mean)
        rhs -= pilots.matrix.t() * cov.mean;
    arma::cx_vec h_hat = filter * rhs;
    if (has_mean)
        h_hat += cov.mean;
    return ChannelEstimate{std::move(h_hat), Estimator::LMMSE};
}

double mse_closed_form_ls(const PilotMatrix& pilots, const ChannelCovariance& cov, double sigma2)
{
    require_pilot_cov_match(pilots, cov);
    if (sigma2 < 0.0)
        throw std::invalid_argument("mse_closed_form_ls: sigma2 must be >= 0");

    const arma::cx_mat projected = pilots.matrix.t() * cov.matrix * pilots.matrix;
    double mse = std::real(arma::trace(cov.matrix)) - std::real(arma::trace(projected)) +
                 sigma2 * static_cast<double>(pilots.num_pilots());

    // A nonzero mean leaks through the projector exactly like a deterministic
    // channel component.
    if (!cov.mean.is_empty())
    {
        const arma::cx_vec residual =
            cov.mean - pilots.matrix * (pilots.matrix.t() * cov.mean);
        mse += std::real(arma::cdot(residual, residual));
    }
    return mse;
}

double mse_closed_form_lmmse(const PilotMatrix& pilots, const ChannelCovariance& cov, double sigma2)
{
    require_pilot_cov_match(pilots, cov);
    if (sigma2 < 0.0)
        throw std::invalid_argument("mse_closed_form_lmmse: sigma2 must be >= 0");

    const arma::cx_mat cphi = cov.matrix * pilots.matrix; // M x T
    arma::cx_mat gram = pilots.matrix.t() * cphi;

    arma::cx_mat x; // A^-1 (C Phi)^H
    if (sigma2 == 0.0)
    {
        x = guarded_hermitian_inverse(gram, "mse_closed_form_lmmse") * cphi.t();
    }
    else
    {
        gram.diag() += sigma2;
        if (!arma::solve(x, gram, cphi.t(),
                         arma::solve_opts::likely_sympd + arma::solve_opts::no_approx))
            throw SingularSystem("mse_closed_form_lmmse: solve failed");
    }
    return std::real(arma::trace(cov.matrix)) - std::real(arma::trace(cphi * x));
}

} // namespace misosim
