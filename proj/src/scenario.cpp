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

#include "misosim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "misosim/errors.hpp"

namespace misosim
{

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

namespace
{

struct RawEntry
{
    std::string value;
    std::size_t line = 0;
};

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what)
{
    throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const RawEntry& e, const std::string& key)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size())
            parse_fail(e.line, "trailing characters in numeric value for '" + key + "'");
        return v;
    }
    catch (const std::logic_error&)
    {
        parse_fail(e.line, "expected a number for '" + key + "', got '" + e.value + "'");
    }
}

arma::uword to_uword(const RawEntry& e, const std::string& key)
{
    const double v = to_double(e, key);
    if (v < 0.0 || v != std::floor(v))
        parse_fail(e.line, "expected a nonnegative integer for '" + key + "'");
    return static_cast<arma::uword>(v);
}

std::uint64_t to_u64(const RawEntry& e, const std::string& key)
{
    try
    {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(e.value, &used);
        if (used != e.value.size())
            parse_fail(e.line, "trailing characters in integer value for '" + key + "'");
        return v;
    }
    catch (const std::logic_error&)
    {
        parse_fail(e.line, "expected an unsigned integer for '" + key + "', got '" + e.value + "'");
    }
}

bool to_bool(const RawEntry& e, const std::string& key)
{
    if (e.value == "true" || e.value == "1" || e.value == "yes")
        return true;
    if (e.value == "false" || e.value == "0" || e.value == "no")
        return false;
    parse_fail(e.line, "expected true/false for '" + key + "'");
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

// Accepts either a comma list ("-20,-15,-10") or a range "a..b step s".
std::vector<double> parse_power_grid(const RawEntry& e)
{
    const auto dots = e.value.find("..");
    if (dots != std::string::npos)
    {
        const auto step_kw = e.value.find("step", dots);
        if (step_kw == std::string::npos)
            parse_fail(e.line, "power range must look like '-20..40 step 5'");
        try
        {
            const double lo = std::stod(trim(e.value.substr(0, dots)));
            const double hi = std::stod(trim(e.value.substr(dots + 2, step_kw - dots - 2)));
            const double step = std::stod(trim(e.value.substr(step_kw + 4)));
            if (step <= 0.0 || hi < lo)
                parse_fail(e.line, "power range needs step > 0 and an ascending interval");
            std::vector<double> grid;
            for (int i = 0;; ++i)
            {
                const double v = lo + step * i;
                if (v > hi + 1e-9)
                    break;
                grid.push_back(v);
            }
            return grid;
        }
        catch (const std::logic_error&)
        {
            parse_fail(e.line, "malformed power range '" + e.value + "'");
        }
    }

    std::vector<double> grid;
    for (const auto& tok : split_list(e.value))
    {
        try
        {
            grid.push_back(std::stod(tok));
        }
        catch (const std::logic_error&)
        {
            parse_fail(e.line, "malformed power value '" + tok + "'");
        }
    }
    return grid;
}

} // namespace

ScenarioConfig parse_config(const std::string& text)
{
    std::map<std::string, RawEntry> entries;
    {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const std::string stripped = trim(line);
            if (stripped.empty())
                continue;

            auto sep = stripped.find('=');
            if (sep == std::string::npos)
                sep = stripped.find(':');
            if (sep == std::string::npos)
                parse_fail(line_no, "expected 'key = value'");

            const std::string key = trim(stripped.substr(0, sep));
            const std::string value = trim(stripped.substr(sep + 1));
            if (key.empty())
                parse_fail(line_no, "empty key");
            if (value.empty())
                parse_fail(line_no, "empty value for '" + key + "'");
            if (entries.count(key))
                parse_fail(line_no, "duplicate key '" + key + "'");
            entries[key] = RawEntry{value, line_no};
        }
    }

    ScenarioConfig cfg;
    cfg.power_grid_db.clear();

    std::set<std::string> seen;
    const auto take = [&](const std::string& key) -> const RawEntry* {
        const auto it = entries.find(key);
        if (it == entries.end())
            return nullptr;
        seen.insert(key);
        return &it->second;
    };

    if (const auto* e = take("M"))
        cfg.num_antennas = to_uword(*e, "M");
    if (const auto* e = take("K"))
        cfg.num_users = to_uword(*e, "K");
    if (const auto* e = take("T_dl"))
        cfg.num_pilots = to_uword(*e, "T_dl");
    if (const auto* e = take("T_coh"))
        cfg.coherence_length = to_uword(*e, "T_coh");
    if (const auto* e = take("power_grid_db"))
        cfg.power_grid_db = parse_power_grid(*e);
    if (const auto* e = take("feedback_power_db"))
        cfg.feedback_power_db = to_double(*e, "feedback_power_db");
    if (const auto* e = take("n_cov"))
        cfg.n_cov = to_uword(*e, "n_cov");
    if (const auto* e = take("n_ch"))
        cfg.n_ch = to_uword(*e, "n_ch");
    if (const auto* e = take("master_seed"))
        cfg.master_seed = to_u64(*e, "master_seed");
    if (const auto* e = take("noiseless_training"))
        cfg.noiseless_training = to_bool(*e, "noiseless_training");

    if (const auto* e = take("estimators"))
    {
        cfg.estimators.clear();
        for (const auto& name : split_list(e->value))
        {
            try
            {
                cfg.estimators.push_back(estimator_from_name(name));
            }
            catch (const ParseError&)
            {
                parse_fail(e->line, "unknown estimator '" + name + "'");
            }
        }
    }
    if (const auto* e = take("precoders"))
    {
        cfg.precoders.clear();
        for (const auto& name : split_list(e->value))
        {
            try
            {
                cfg.precoders.push_back(precoder_from_name(name));
            }
            catch (const ParseError&)
            {
                parse_fail(e->line, "unknown precoder '" + name + "'");
            }
        }
    }
    if (const auto* e = take("pilot_kind"))
    {
        try
        {
            cfg.pilot_kind = pilot_kind_from_name(e->value);
        }
        catch (const ParseError&)
        {
            parse_fail(e->line, "unknown pilot kind '" + e->value + "'");
        }
    }
    if (const auto* e = take("antenna_spacing"))
        cfg.antenna_spacing = to_double(*e, "antenna_spacing");

    // Channel model selection plus its nested parameters.
    std::string model_name = "umi";
    if (const auto* e = take("channel_model"))
        model_name = e->value;

    if (model_name == "umi")
    {
        UmiModelParams umi;
        if (const auto* e = take("channel.num_paths"))
            umi.num_paths = to_uword(*e, "channel.num_paths");
        if (const auto* e = take("channel.num_rays"))
            umi.num_rays = to_uword(*e, "channel.num_rays");
        if (const auto* e = take("channel.cluster_power_decay"))
            umi.cluster_power_decay = to_double(*e, "channel.cluster_power_decay");
        if (const auto* e = take("channel.per_cluster_angle_spread"))
            umi.per_cluster_angle_spread = to_double(*e, "channel.per_cluster_angle_spread");
        if (const auto* e = take("channel.azimuth_min"))
            umi.azimuth_min = to_double(*e, "channel.azimuth_min");
        if (const auto* e = take("channel.azimuth_max"))
            umi.azimuth_max = to_double(*e, "channel.azimuth_max");
        if (const auto* e = take("channel.pathloss"))
        {
            if (e->value == "unit_trace")
                umi.pathloss = PathlossMode::UnitTrace;
            else if (e->value == "distance_based")
                umi.pathloss = PathlossMode::DistanceBased;
            else
                parse_fail(e->line, "channel.pathloss must be unit_trace or distance_based");
        }
        if (const auto* e = take("channel.pathloss_exponent"))
            umi.pathloss_exponent = to_double(*e, "channel.pathloss_exponent");
        if (const auto* e = take("channel.cell_radius_m"))
            umi.cell_radius_m = to_double(*e, "channel.cell_radius_m");
        cfg.channel = umi;
    }
    else if (model_name == "scaled_identity")
    {
        ScaledIdentityModel scaled;
        if (const auto* e = take("channel.c"))
            scaled.c = to_double(*e, "channel.c");
        cfg.channel = scaled;
    }
    else if (model_name == "file")
    {
        const auto* e = take("channel.path");
        if (!e)
            throw ParseError("config: channel_model = file requires channel.path");
        cfg.channel = CovarianceFileModel{e->value};
    }
    else
    {
        throw ParseError("config: unknown channel_model '" + model_name +
                         "' (expected umi, scaled_identity or file)");
    }

    for (const auto& [key, entry] : entries)
        if (!seen.count(key))
            parse_fail(entry.line, "unknown key '" + key + "'");

    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate_config(const ScenarioConfig& cfg)
{
    const auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };

    if (cfg.num_antennas < 1 || cfg.num_users < 1 || cfg.num_pilots < 1)
        fail("M, K and T_dl must all be >= 1");
    if (cfg.num_users > cfg.num_antennas)
        fail("invariant K <= M violated");
    if (cfg.num_pilots > cfg.num_antennas)
        fail("invariant T_dl <= M violated");
    if (cfg.num_pilots >= cfg.coherence_length)
        fail("prelog requires T_dl < T_coh");
    if (cfg.power_grid_db.empty())
        fail("power_grid_db must be nonempty");
    for (const double p : cfg.power_grid_db)
        if (!std::isfinite(p))
            fail("power_grid_db entries must be finite");
    if (cfg.feedback_power_db && !std::isfinite(*cfg.feedback_power_db))
        fail("feedback_power_db must be finite");
    if (cfg.n_cov < 1 || cfg.n_ch < 1)
        fail("n_cov and n_ch must be >= 1");
    if (cfg.estimators.empty())
        fail("estimators must be nonempty");
    if (cfg.precoders.empty())
        fail("precoders must be nonempty");
    if (cfg.antenna_spacing <= 0.0)
        fail("antenna_spacing must be > 0");

    for (const Estimator e : cfg.estimators)
        if (e != Estimator::LS && e != Estimator::LMMSE && e != Estimator::Genie)
            fail("estimators must be a subset of {LS, LMMSE, Genie}");

    {
        std::set<Estimator> unique_est(cfg.estimators.begin(), cfg.estimators.end());
        if (unique_est.size() != cfg.estimators.size())
            fail("estimators must be unique");
        std::set<Precoder> unique_prec(cfg.precoders.begin(), cfg.precoders.end());
        if (unique_prec.size() != cfg.precoders.size())
            fail("precoders must be unique");
    }

    if (const auto* umi = std::get_if<UmiModelParams>(&cfg.channel))
    {
        if (umi->num_paths < 1 || umi->num_rays < 1)
            fail("channel.num_paths and channel.num_rays must be >= 1");
        if (umi->cluster_power_decay < 0.0)
            fail("channel.cluster_power_decay must be >= 0");
        if (umi->per_cluster_angle_spread <= 0.0)
            fail("channel.per_cluster_angle_spread must be > 0");
        if (umi->azimuth_min >= umi->azimuth_max ||
            umi->azimuth_min < -arma::datum::pi / 2 - 1e-12 ||
            umi->azimuth_max > arma::datum::pi / 2 + 1e-12)
            fail("channel azimuth range must be a subinterval of [-pi/2, pi/2]");
        if (umi->pathloss == PathlossMode::DistanceBased && umi->cell_radius_m <= 10.0)
            fail("channel.cell_radius_m must exceed the 10 m minimum distance");
        if (umi->pathloss_exponent <= 0.0)
            fail("channel.pathloss_exponent must be > 0");
    }
    else if (const auto* scaled = std::get_if<ScaledIdentityModel>(&cfg.channel))
    {
        if (scaled->c <= 0.0)
            fail("channel.c must be > 0");
    }
    else if (const auto* file = std::get_if<CovarianceFileModel>(&cfg.channel))
    {
        if (file->path.empty())
            fail("channel.path must be nonempty");
    }
}

} // namespace misosim
