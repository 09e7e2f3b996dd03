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

#ifndef MISOSIM_VERIFY_HPP
#define MISOSIM_VERIFY_HPP

#include <ostream>

#include "misosim/scenario.hpp"

namespace misosim
{

// Runs the analytic identity checks (pilot semi-unitarity, exact nulling of
// estimate-based zero forcing, residual interference of the noiseless LMMSE
// route, closed-form anchors) and prints one PASS/FAIL line each.
// Returns true when everything passed.
bool run_verification(std::ostream& out, std::uint64_t seed = 12345);

// Closed-form vs Monte-Carlo estimation error table over the config's power
// grid, one line per power point.
void print_mse_oracle_table(const ScenarioConfig& config, std::ostream& out);

} // namespace misosim

#endif
