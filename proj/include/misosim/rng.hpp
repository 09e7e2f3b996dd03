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

#ifndef MISOSIM_RNG_HPP
#define MISOSIM_RNG_HPP

#include <armadillo>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>

namespace misosim
{

// SplitMix64 finalizer, used to derive child seeds from a master seed plus
// an index path. The derivation is independent of execution order, so any
// worker can recompute any stream.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Stream tags keep independent random draws (covariances, channels, noise,
// pilots) on non-overlapping substreams of the same master seed.
enum class SeedStream : std::uint64_t
{
    Covariance = 0x11,
    Channel = 0x22,
    TrainingNoise = 0x33,
    Pilot = 0x44,
};

// mt19937_64 with a fixed-consumption Box-Muller transform on top. Every
// normal pair consumes exactly two engine steps, which makes all draw
// sequences reproducible bit-for-bit for a given seed.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Two independent N(0,1) samples from one Box-Muller evaluation.
    std::pair<double, double> normal_pair()
    {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1)); // log(1-u1), u1 < 1
        const double phi = 2.0 * arma::datum::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    // Single N(0,1) sample; the second half of the pair is discarded so the
    // engine consumption stays fixed at two steps per call.
    double normal()
    {
        return normal_pair().first;
    }

    arma::vec normal_vec(arma::uword n)
    {
        arma::vec out(n);
        arma::uword i = 0;
        while (i + 1 < n)
        {
            auto [a, b] = normal_pair();
            out(i++) = a;
            out(i++) = b;
        }
        if (i < n)
            out(i) = normal();
        return out;
    }

    // Circularly-symmetric complex normal CN(0,1): real and imaginary parts
    // are independent N(0, 1/2).
    arma::cx_vec complex_normal_vec(arma::uword n)
    {
        constexpr double isqrt2 = 0.70710678118654752440;
        arma::cx_vec out(n);
        for (arma::uword i = 0; i < n; ++i)
        {
            auto [re, im] = normal_pair();
            out(i) = arma::cx_double(re * isqrt2, im * isqrt2);
        }
        return out;
    }

    std::uint64_t raw()
    {
        return engine_();
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace misosim

#endif
