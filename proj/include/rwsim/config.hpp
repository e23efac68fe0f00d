// SPDX-License-Identifier: Apache-2.0
//
// rwsim - line-of-sight massive MIMO deployment simulator for indoor rooms
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

#pragma once

#include "rwsim/antenna.hpp"
#include "rwsim/geometry.hpp"
#include "rwsim/montecarlo.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rwsim
{

/// Fully resolved run parameters. Defaults reproduce the reference indoor scenario:
/// 2 GHz, 40 x 40 x 10 m room, M = 512, K = 200, sigma2 = -92 dBm, eps_r = 10.2, h = 1.588 mm.
struct RunConfig
{
    double frequency = 2.0e9; // Hz
    Room room;
    int m_count = 512;
    int k_count = 200;
    double noise_figure_db = 9.0;
    double bandwidth = 20.0e6; // Hz
    double noise_power_dbm = -92.0;
    double eps_r = 10.2;
    double substrate_height = 1.588e-3; // m
    XDimension x_dimension = XDimension::SubstrateHeight;

    int tau_p = 0; // 0 = K
    int tau_c = 0; // 0 = 10 K

    double user_height = 1.5;
    double margin = 1.0;
    double exclusion = 0.5;
    int n_drops = 10000;
    std::uint64_t seed = 1;

    double target_se = 4.0;
    double rho_ul_dbm = 0.0;
    bool power_from_estimates = true;
    bool prelog_in_power = false;
    double ccdf_step_db = 0.1;

    std::vector<double> rho_ul_grid_dbm{-30.0, -20.0, -10.0, 0.0};
    std::vector<double> rho_dl_grid_dbm{-40.0, -30.0, -20.0, -10.0};
    double percentile = 0.999;
    int n_realizations = 200;
    RateStatistic rate_statistic = RateStatistic::Pooled;

    int workers = 0; // 0 = hardware concurrency
    CandelabrumLayout candelabrum;

    // Non-fatal findings from validation, e.g. inconsistent noise power.
    std::vector<std::string> warnings;

    double wavelength() const { return speed_of_light / frequency; }
    double sigma2() const { return dbm_to_watt(noise_power_dbm); }
    // -174 dBm/Hz + 10 log10(B) + F
    double thermal_noise_dbm() const;

    SubstrateSpec substrate() const { return {eps_r, frequency, substrate_height}; }
    PilotConfig pilots(double rho_ul) const;
    DropSpec drop_spec() const;
    LinkBudget power_budget() const;

    // Resolved configuration, including derived values, as written to run manifests.
    nlohmann::json to_json() const;
};

/// Builds a RunConfig from a JSON object; absent keys keep their defaults.
///
/// Throws ConfigError naming the JSON pointer of the offending key for unknown keys,
/// wrong types and out-of-range values.
RunConfig parse_config(const nlohmann::json &doc);

/// Reads `path` (empty = no file), applies `key.path=value` overrides (value parsed as
/// JSON, else taken as a string) and parses the result.
RunConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides = {});

// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json &resolved);

} // namespace rwsim
