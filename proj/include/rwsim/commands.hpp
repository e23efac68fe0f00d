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

#include "rwsim/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rwsim
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_io = 4,
};

// Resolves "all" or a single topology name.
std::vector<TopologyKind> select_topologies(const std::string &selection);

std::string software_version();

/// Prints the patch design as labeled values followed by a CSV block on `out`.
/// When `out_dir` is non-empty the CSV is also written to out_dir/patch.csv.
void cmd_design_patch(const RunConfig &cfg, std::ostream &out, const std::filesystem::path &out_dir);

// topology_<name>.csv per selected kind, plus manifest.json.
void cmd_dump_topology(const RunConfig &cfg, const std::vector<TopologyKind> &kinds,
                       const std::filesystem::path &out_dir, std::ostream &log);

// ccdf_<name>.csv per selected kind (columns power_dBm,prob), plus manifest.json.
void cmd_power_ccdf(const RunConfig &cfg, const std::vector<TopologyKind> &kinds,
                    const std::filesystem::path &out_dir, std::ostream &log);

// rate_map_<name>.csv per selected kind (columns rho_ul_dBm,rho_dl_dBm,rate_bit_per_s_per_Hz), plus manifest.json.
void cmd_rate_map(const RunConfig &cfg, const std::vector<TopologyKind> &kinds, const std::filesystem::path &out_dir,
                  std::ostream &log);

// CSV serializers shared by the commands and tests.
void write_ccdf_csv(std::ostream &os, const std::vector<CcdfPoint> &ccdf);
void write_rate_surface_csv(std::ostream &os, const std::vector<RateCell> &surface);

} // namespace rwsim
