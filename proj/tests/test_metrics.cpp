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

#include <catch2/catch_amalgamated.hpp>

#include "misosim/errors.hpp"
#include "misosim/metrics.hpp"

using namespace misosim;

namespace
{

arma::cx_mat umi_channel_matrix(arma::uword m, arma::uword k, Rng& rng)
{
    const SteeringParams steer{m, 0.5};
    arma::cx_mat h(m, k);
    for (arma::uword u = 0; u < k; ++u)
    {
        const ChannelCovariance cov = build_umi_covariance(UmiModelParams{}, steer, rng);
        h.col(u) = sample_channel(factorize(cov, 1e-12), arma::cx_vec(), rng);
    }
    return h;
}

} // namespace

TEST_CASE("single-user SINR", "[metrics]")
{
    const arma::cx_mat h(1, 1, arma::fill::ones);
    const PrecodingMatrix p{arma::cx_mat(1, 1, arma::fill::ones), 1.0, Precoder::MF};
    const arma::vec sinr = sinr_per_user(h, p, 1.0);
    REQUIRE(sinr.n_elem == 1);
    CHECK(std::abs(sinr(0) - 1.0) < 1e-15);
}

TEST_CASE("genie zero forcing yields the interference-free SINR", "[metrics]")
{
    Rng rng(7);
    const arma::cx_mat h = umi_channel_matrix(16, 4, rng);
    const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h));
    const double sigma2 = 0.2;
    const arma::vec sinr = sinr_per_user(h, p, sigma2);
    const double expected = p.normalization * p.normalization / sigma2;
    for (arma::uword u = 0; u < 4; ++u)
        CHECK(std::abs(sinr(u) - expected) < 1e-6 * expected);
}

TEST_CASE("zero precoder gives zero SINR", "[metrics]")
{
    const arma::cx_mat h(3, 2, arma::fill::ones);
    const PrecodingMatrix p{arma::cx_mat(3, 2, arma::fill::zeros), 0.0, Precoder::MF};
    const arma::vec sinr = sinr_per_user(h, p, 0.5);
    CHECK(sinr.max() == 0.0);
}

TEST_CASE("prelog factors", "[metrics]")
{
    const arma::cx_mat h = arma::eye<arma::cx_mat>(2, 2);
    const PrecodingMatrix p{(1.0 / std::sqrt(2.0)) * arma::eye<arma::cx_mat>(2, 2), 1.0,
                            Precoder::ZF};
    CHECK(std::abs(rates(h, p, 1.0, 32, 200).prelog - 0.84) < 1e-15);
    CHECK(std::abs(rates(h, p, 1.0, 16, 200).prelog - 0.92) < 1e-15);
    CHECK_THROWS_AS(rates(h, p, 1.0, 200, 200), InvalidPrelog);
}

TEST_CASE("sum rate composes per-user rates", "[metrics]")
{
    // Two users at SINR 1 and prelog 1/2 give tau * 2 * log2(2) = 1.
    arma::cx_mat h = arma::eye<arma::cx_mat>(2, 2);
    PrecodingMatrix p{arma::eye<arma::cx_mat>(2, 2), 1.0, Precoder::ZF};
    const RateBreakdown rb = rates(h, p, 1.0, 100, 200);
    CHECK(std::abs(rb.per_user_sinr(0) - 1.0) < 1e-14);
    CHECK(std::abs(rb.per_user_sinr(1) - 1.0) < 1e-14);
    CHECK(std::abs(rb.sum_rate - 1.0) < 1e-12);

    const double recomputed = rb.prelog * arma::accu(arma::log2(1.0 + rb.per_user_sinr));
    CHECK(std::abs(rb.sum_rate - recomputed) < 1e-12);
}

TEST_CASE("SINR is invariant to per-column phase rotations", "[metrics]")
{
    Rng rng(9);
    const arma::cx_mat h = umi_channel_matrix(8, 3, rng);
    const PrecodingMatrix base = mf_precoder(EstimatedChannelMatrix(h));

    PrecodingMatrix rotated = base;
    rotated.matrix.col(0) *= std::polar(1.0, 1.1);
    rotated.matrix.col(2) *= std::polar(1.0, -2.3);

    const arma::vec a = sinr_per_user(h, base, 0.3);
    const arma::vec b = sinr_per_user(h, rotated, 0.3);
    CHECK(arma::abs(a - b).max() < 1e-12 * a.max());
}

TEST_CASE("genie zero-forcing sum rate is nondecreasing in power", "[metrics]")
{
    Rng rng(11);
    const arma::cx_mat h = umi_channel_matrix(16, 4, rng);
    const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h));
    double previous = -1.0;
    for (double db = -20.0; db <= 40.0; db += 5.0)
    {
        const double sigma2 = 1.0 / std::pow(10.0, db / 10.0);
        const double sum = rates(h, p, sigma2, 16, 200).sum_rate;
        CHECK(sum > previous);
        previous = sum;
    }
}

TEST_CASE("rates are deterministic", "[metrics]")
{
    Rng rng(13);
    const arma::cx_mat h = umi_channel_matrix(8, 2, rng);
    const PrecodingMatrix p = zf_precoder(EstimatedChannelMatrix(h));
    const RateBreakdown a = rates(h, p, 0.1, 8, 100);
    const RateBreakdown b = rates(h, p, 0.1, 8, 100);
    CHECK(a.sum_rate == b.sum_rate);
}

TEST_CASE("sample errors", "[metrics]")
{
    const arma::cx_vec h{1.0, 0.0};
    CHECK(mse_sample(h, ChannelEstimate{h, Estimator::Genie}) == 0.0);

    const ChannelEstimate swapped{arma::cx_vec{0.0, 1.0}, Estimator::LS};
    CHECK(std::abs(mse_sample(h, swapped) - 2.0) < 1e-15);

    const arma::cx_vec h2{arma::cx_double(1.0, 1.0), arma::cx_double(0.0, 0.0)};
    const ChannelEstimate zero{arma::cx_vec{0.0, 0.0}, Estimator::LS};
    CHECK(std::abs(mse_sample(h2, zero) - 2.0) < 1e-15);

    CHECK_THROWS_AS(mse_sample(arma::cx_vec{1.0}, swapped), DimensionMismatch);
}
