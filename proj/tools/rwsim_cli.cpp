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

#include "rwsim/commands.hpp"
#include "rwsim/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char **argv)
{
    CLI::App app{"Indoor line-of-sight massive MIMO deployment simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rwsim::software_version());

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::string topology = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<int> workers;

    auto add_common = [&](CLI::App *sub, bool with_topology) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--set", overrides, "Override a config key, e.g. --set k=20 --set candelabrum.tilt_deg=30");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--drops", drops, "Number of user drops");
        sub->add_option("--workers", workers, "Worker threads (0 = all cores)");
        sub->add_option("--out", out_dir, "Output directory");
        if (with_topology)
            sub->add_option("--topology,--kind", topology, "Topology name or 'all'");
    };

    auto *design = app.add_subcommand("design-patch", "Design the patch element and print its dimensions");
    add_common(design, false);
    bool design_write = false;
    design->add_flag("--write", design_write, "Also write patch.csv into --out");
    auto *dump = app.add_subcommand("dump-topology", "Write antenna positions and orientations as CSV");
    add_common(dump, true);
    auto *power = app.add_subcommand("power-ccdf", "Required ZF transmit power CCDF per topology");
    add_common(power, true);
    auto *rate = app.add_subcommand("rate-map", "Low-percentile achievable rate over uplink/downlink power grids");
    add_common(rate, true);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? rwsim::exit_ok : rwsim::exit_usage;
    }

    try
    {
        if (seed)
            overrides.push_back("seed=" + std::to_string(*seed));
        if (drops)
            overrides.push_back("n_drops=" + std::to_string(*drops));
        if (workers)
            overrides.push_back("workers=" + std::to_string(*workers));
        const rwsim::RunConfig cfg = rwsim::load_config(config_path, overrides);
        for (const auto &w : cfg.warnings)
            std::cerr << "warning: " << w << '\n';

        if (design->parsed())
            rwsim::cmd_design_patch(cfg, std::cout, design_write ? out_dir : std::string{});
        else if (dump->parsed())
            rwsim::cmd_dump_topology(cfg, rwsim::select_topologies(topology), out_dir, std::cout);
        else if (power->parsed())
            rwsim::cmd_power_ccdf(cfg, rwsim::select_topologies(topology), out_dir, std::cout);
        else if (rate->parsed())
        {
            if (rate->get_option("--topology")->count() == 0)
                topology = "double-strip-4walls";
            rwsim::cmd_rate_map(cfg, rwsim::select_topologies(topology), out_dir, std::cout);
        }
    }
    catch (const rwsim::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return rwsim::exit_config;
    }
    catch (const rwsim::GeometryError &e)
    {
        std::cerr << "geometry error: " << e.what() << '\n';
        return rwsim::exit_config;
    }
    catch (const rwsim::NumericalError &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return rwsim::exit_numerical;
    }
    catch (const rwsim::IoError &e)
    {
        std::cerr << "I/O error: " << e.what() << '\n';
        return rwsim::exit_io;
    }
    return rwsim::exit_ok;
}
