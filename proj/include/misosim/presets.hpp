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

#ifndef MISOSIM_PRESETS_HPP
#define MISOSIM_PRESETS_HPP

#include <string>
#include <vector>

#include "misosim/scenario.hpp"

namespace misosim
{

// A preset may expand to several sweeps (pilot-length sweeps run one config
// per T_dl value); single-sweep presets carry an empty label.
struct PresetRun
{
    std::string label;
    ScenarioConfig config;
};

struct FigurePreset
{
    std::string name;
    std::vector<PresetRun> runs;
};

// Named experiment presets fig1..fig8 covering the MSE curves, the rate
// curves with and without pilot contamination, the pilot-length sweeps, the
// noisy-feedback variant and the large-array urban-micro drop. quick shrinks
// the Monte-Carlo depth to n_cov=20, n_ch=50.
FigurePreset figure_preset(const std::string& name, bool quick = false);

std::vector<std::string> preset_names();

} // namespace misosim

#endif
