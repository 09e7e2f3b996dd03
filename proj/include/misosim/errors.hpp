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

#ifndef MISOSIM_ERRORS_HPP
#define MISOSIM_ERRORS_HPP

#include <stdexcept>

namespace misosim
{

// Argument/shape problems detectable before any computation.
struct DimensionMismatch : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct InvalidDimensions : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct NonPositivePower : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct NonHermitian : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct NotPositiveSemidefinite : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct ZeroMatrix : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct InvalidPrelog : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct UnknownPreset : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Numerical failures raised while computing.
struct SingularSystem : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct SingularPilotGram : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RankDeficient : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Configuration and I/O failures.
struct ParseError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace misosim

#endif
