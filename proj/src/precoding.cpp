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

#include "misosim/precoding.hpp"

#include "misosim/errors.hpp"

namespace misosim
{

namespace
{
constexpr double kGramConditionLimit = 1e12;
}

const char* precoder_name(Precoder precoder)
{
    switch (precoder)
    {
    case Precoder::ZF:
        return "ZF";
    case Precoder::MF:
        return "MF";
    }
    return "?";
}

Precoder precoder_from_name(const std::string& name)
{
    if (name == "ZF")
        return Precoder::ZF;
    if (name == "MF")
        return Precoder::MF;
    throw ParseError("unknown precoder '" + name + "'");
}

EstimatedChannelMatrix::EstimatedChannelMatrix(arma::cx_mat m) : matrix(std::move(m))
{
    if (matrix.n_rows == 0 || matrix.n_cols == 0)
        throw InvalidDimensions("estimated channel matrix must be nonempty");
    if (!matrix.is_finite())
        throw std::invalid_argument("estimated channel matrix has non-finite entries");
}

EstimatedChannelMatrix EstimatedChannelMatrix::from_estimates(
    const std::vector<ChannelEstimate>& estimates)
{
    if (estimates.empty())
        throw InvalidDimensions("need at least one channel estimate");
    const arma::uword m = estimates.front().h_hat.n_elem;
    arma::cx_mat out(m, estimates.size());
    for (arma::uword k = 0; k < estimates.size(); ++k)
    {
        if (estimates[k].h_hat.n_elem != m)
            throw DimensionMismatch("channel estimates must all have the same length");
        out.col(k) = estimates[k].h_hat;
    }
    return EstimatedChannelMatrix(std::move(out));
}

PrecodingMatrix zf_precoder(const EstimatedChannelMatrix& h_hat)
{
    const arma::cx_mat& h = h_hat.matrix;
    const arma::cx_mat gram = h.t() * h; // K x K Hermitian PSD

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, gram))
        throw RankDeficient("zf_precoder: Gram eigendecomposition failed");

    const double lambda_max = eigval.max();
    const double lambda_min = eigval.min();
    if (lambda_max <= 0.0 || lambda_min <= lambda_max / kGramConditionLimit)
        throw RankDeficient("zf_precoder: estimated channel matrix is rank deficient");

    const arma::cx_mat gram_inv = eigvec * arma::diagmat(1.0 / eigval) * eigvec.t();
    const double trace_inv = arma::accu(1.0 / eigval);
    const double delta = 1.0 / std::sqrt(trace_inv);

    return PrecodingMatrix{delta * (h * gram_inv), delta, Precoder::ZF};
}

PrecodingMatrix mf_precoder(const EstimatedChannelMatrix& h_hat)
{
    const double frob2 = arma::accu(arma::square(arma::abs(h_hat.matrix)));
    if (frob2 <= 0.0)
        throw ZeroMatrix("mf_precoder: estimated channel matrix is zero");
    const double delta = 1.0 / std::sqrt(frob2);
    return PrecodingMatrix{delta * h_hat.matrix, delta, Precoder::MF};
}

arma::cx_mat effective_channel(const arma::cx_mat& h_true, const PrecodingMatrix& precoder)
{
    if (h_true.n_rows != precoder.matrix.n_rows)
        throw DimensionMismatch("effective_channel: channel and precoder row counts differ");
    return h_true.t() * precoder.matrix;
}

} // namespace misosim
