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

#include "misosim/training.hpp"

#include "misosim/errors.hpp"

namespace misosim
{

const char* pilot_kind_name(PilotKind kind)
{
    switch (kind)
    {
    case PilotKind::DftSubset:
        return "dft_subset";
    case PilotKind::RandomSemiUnitary:
        return "random_semi_unitary";
    case PilotKind::IdentitySubset:
        return "identity_subset";
    }
    return "?";
}

PilotKind pilot_kind_from_name(const std::string& name)
{
    if (name == "dft_subset")
        return PilotKind::DftSubset;
    if (name == "random_semi_unitary")
        return PilotKind::RandomSemiUnitary;
    if (name == "identity_subset")
        return PilotKind::IdentitySubset;
    throw ParseError("unknown pilot kind '" + name + "'");
}

PilotMatrix make_pilot_matrix(arma::uword num_antennas, arma::uword num_pilots, PilotKind kind,
                              Rng& rng)
{
    if (num_antennas == 0 || num_pilots == 0 || num_pilots > num_antennas)
        throw InvalidDimensions("make_pilot_matrix: need 1 <= T_dl <= M");

    arma::cx_mat phi(num_antennas, num_pilots);
    switch (kind)
    {
    case PilotKind::DftSubset:
    {
        const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
        const double step = -2.0 * arma::datum::pi / static_cast<double>(num_antennas);
        for (arma::uword t = 0; t < num_pilots; ++t)
            for (arma::uword m = 0; m < num_antennas; ++m)
                phi(m, t) = std::polar(scale, step * static_cast<double>((m * t) % num_antennas));
        break;
    }
    case PilotKind::RandomSemiUnitary:
    {
        arma::cx_mat g(num_antennas, num_pilots);
        for (arma::uword t = 0; t < num_pilots; ++t)
            g.col(t) = rng.complex_normal_vec(num_antennas);
        arma::cx_mat q, r;
        if (!arma::qr_econ(q, r, g))
            throw std::runtime_error("make_pilot_matrix: QR factorization failed");
        // Fix the gauge so the factorization sign convention cannot leak through.
        for (arma::uword t = 0; t < num_pilots; ++t)
        {
            const arma::cx_double d = r(t, t);
            if (std::abs(d) > 0.0)
                q.col(t) *= d / std::abs(d);
        }
        phi = q;
        break;
    }
    case PilotKind::IdentitySubset:
        phi.zeros();
        for (arma::uword t = 0; t < num_pilots; ++t)
            phi(t, t) = 1.0;
        break;
    }
    return PilotMatrix{std::move(phi), kind};
}

double effective_noise_variance(double p_dl, std::optional<double> p_fb)
{
    if (p_dl <= 0.0)
        throw NonPositivePower("effective_noise_variance: downlink power must be > 0");
    double var = 1.0 / p_dl;
    if (p_fb)
    {
        if (*p_fb <= 0.0)
            throw NonPositivePower("effective_noise_variance: feedback power must be > 0");
        var += 1.0 / *p_fb;
    }
    return var;
}

TrainingObservation observe(const PilotMatrix& pilots, const arma::cx_vec& h, double sigma2,
                            Rng& rng)
{
    if (h.n_elem != pilots.num_antennas())
        throw DimensionMismatch("observe: channel length must equal the pilot rows");
    if (sigma2 < 0.0)
        throw std::invalid_argument("observe: sigma2 must be >= 0");

    arma::cx_vec y = pilots.matrix.t() * h;
    if (sigma2 > 0.0)
        y += std::sqrt(sigma2) * rng.complex_normal_vec(pilots.num_pilots());
    return TrainingObservation{std::move(y), sigma2};
}

} // namespace misosim
