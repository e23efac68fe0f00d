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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef RWSIM_VERSION
#define RWSIM_VERSION "unknown"
#endif

namespace rwsim
{

namespace
{

using json = nlohmann::json;

std::ofstream open_output(const std::filesystem::path &path)
{
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path(), ec);
    if (ec)
        throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path)
{
    out.flush();
    if (!out)
        throw IoError("write to " + path.string() + " failed");
}

json manifest_base(const RunConfig &cfg, const std::string &command)
{
    const json resolved = cfg.to_json();
    return json{
        {"software", "rwsim"},
        {"version", software_version()},
        {"command", command},
        {"config", resolved},
        {"config_hash", config_hash(resolved)},
        {"seed", cfg.seed},
        {"warnings", cfg.warnings},
        {"outputs", json::array()},
    };
}

void write_manifest(const std::filesystem::path &out_dir, const json &manifest)
{
    const auto path = out_dir / "manifest.json";
    auto out = open_output(path);
    out << manifest.dump(2) << '\n';
    finish(out, path);
}

Scenario make_scenario(const RunConfig &cfg)
{
    Scenario s;
    s.room = cfg.room;
    s.m_count = cfg.m_count;
    s.dims = design_patch(cfg.substrate(), cfg.x_dimension);
    s.candelabrum = cfg.candelabrum;
    return s;
}

} // namespace

std::string software_version() { return RWSIM_VERSION; }

std::vector<TopologyKind> select_topologies(const std::string &selection)
{
    if (selection == "all")
        return {std::begin(all_topologies), std::end(all_topologies)};
    return {parse_topology(selection)};
}

void write_ccdf_csv(std::ostream &os, const std::vector<CcdfPoint> &ccdf)
{
    os << "power_dBm,prob\n";
    char buf[96];
    for (const auto &pt : ccdf)
    {
        std::snprintf(buf, sizeof buf, "%.6f,%.10g\n", watt_to_dbm(pt.power), pt.probability);
        os << buf;
    }
}

void write_rate_surface_csv(std::ostream &os, const std::vector<RateCell> &surface)
{
    os << "rho_ul_dBm,rho_dl_dBm,rate_bit_per_s_per_Hz\n";
    char buf[128];
    for (const auto &cell : surface)
    {
        const double ul = watt_to_dbm(cell.rho_ul);
        const double dl = cell.rho_dl > 0.0 ? watt_to_dbm(cell.rho_dl) : -HUGE_VAL;
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.10g\n", ul, dl, cell.rate);
        os << buf;
    }
}

void cmd_design_patch(const RunConfig &cfg, std::ostream &out, const std::filesystem::path &out_dir)
{
    const PatchDims d = design_patch(cfg.substrate(), cfg.x_dimension);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "W        = %.9g m\n"
                  "L        = %.9g m\n"
                  "eps_reff = %.9g\n"
                  "delta_L  = %.9g m\n"
                  "alpha^2  = %.9g\n",
                  d.width, d.length, d.eps_reff, d.delta_l, d.alpha * d.alpha);
    out << buf << '\n';

    std::snprintf(buf, sizeof buf, "W_m,L_m,eps_reff,delta_L_m,alpha2\n%.17g,%.17g,%.17g,%.17g,%.17g\n", d.width,
                  d.length, d.eps_reff, d.delta_l, d.alpha * d.alpha);
    out << buf;

    if (!out_dir.empty())
    {
        const auto path = out_dir / "patch.csv";
        auto f = open_output(path);
        f << buf;
        finish(f, path);
    }
}

void cmd_dump_topology(const RunConfig &cfg, const std::vector<TopologyKind> &kinds,
                       const std::filesystem::path &out_dir, std::ostream &log)
{
    json manifest = manifest_base(cfg, "dump-topology");
    for (const auto kind : kinds)
    {
        const Topology topo = build_topology(kind, cfg.room, cfg.m_count, cfg.wavelength(), cfg.candelabrum);
        const std::string name = "topology_" + std::string(topology_name(kind)) + ".csv";
        const auto path = out_dir / name;
        auto f = open_output(path);
        write_topology_csv(f, topo);
        finish(f, path);
        manifest["outputs"].push_back({{"file", name}, {"topology", topology_name(kind)}, {"rows", topo.poses.size()}});
        log << "wrote " << path.string() << " (" << topo.poses.size() << " elements)\n";
    }
    write_manifest(out_dir, manifest);
}

void cmd_power_ccdf(const RunConfig &cfg, const std::vector<TopologyKind> &kinds,
                    const std::filesystem::path &out_dir, std::ostream &log)
{
    const Scenario scenario = make_scenario(cfg);
    PowerCampaignOptions opt;
    opt.budget = cfg.power_budget();
    opt.pilots = cfg.pilots(dbm_to_watt(cfg.rho_ul_dbm));
    opt.use_estimates = cfg.power_from_estimates;
    opt.ccdf_step_db = cfg.ccdf_step_db;
    opt.workers = cfg.workers;

    json manifest = manifest_base(cfg, "power-ccdf");
    for (const auto kind : kinds)
    {
        const auto res = run_power_campaign(kind, scenario, cfg.drop_spec(), opt);
        const std::string name = "ccdf_" + std::string(topology_name(kind)) + ".csv";
        const auto path = out_dir / name;
        auto f = open_output(path);
        write_ccdf_csv(f, res.ccdf);
        finish(f, path);

        const double median = res.median_power();
        const auto [lo, hi] = median_confidence_interval(res.valid_powers());
        manifest["outputs"].push_back({{"file", name},
                                       {"topology", topology_name(kind)},
                                       {"failed_drops", res.failed_drops},
                                       {"median_power_dbm", watt_to_dbm(median)},
                                       {"median_ci95_dbm", {watt_to_dbm(lo), watt_to_dbm(hi)}}});
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-20s median %.2f dBm (95%% CI %.2f .. %.2f), %d failed drops\n",
                      std::string(topology_name(kind)).c_str(), watt_to_dbm(median), watt_to_dbm(lo),
                      watt_to_dbm(hi), res.failed_drops);
        log << buf;
    }
    write_manifest(out_dir, manifest);
}

void cmd_rate_map(const RunConfig &cfg, const std::vector<TopologyKind> &kinds, const std::filesystem::path &out_dir,
                  std::ostream &log)
{
    const Scenario scenario = make_scenario(cfg);
    RateCampaignOptions opt;
    for (double dbm : cfg.rho_ul_grid_dbm)
        opt.rho_ul_grid.push_back(dbm_to_watt(dbm));
    for (double dbm : cfg.rho_dl_grid_dbm)
        opt.rho_dl_grid.push_back(dbm_to_watt(dbm));
    opt.pilots = cfg.pilots(dbm_to_watt(cfg.rho_ul_dbm));
    opt.percentile = cfg.percentile;
    opt.n_realizations = cfg.n_realizations;
    opt.statistic = cfg.rate_statistic;
    opt.workers = cfg.workers;

    json manifest = manifest_base(cfg, "rate-map");
    for (const auto kind : kinds)
    {
        const auto res = run_rate_campaign(kind, scenario, cfg.drop_spec(), opt);
        const std::string name = "rate_map_" + std::string(topology_name(kind)) + ".csv";
        const auto path = out_dir / name;
        auto f = open_output(path);
        write_rate_surface_csv(f, res.surface);
        finish(f, path);
        manifest["outputs"].push_back({{"file", name},
                                       {"topology", topology_name(kind)},
                                       {"failed_drops", res.failed_drops},
                                       {"discarded_draws", res.discarded_draws}});
        log << "wrote " << path.string() << " (" << res.surface.size() << " cells, " << res.failed_drops
            << " failed drops, " << res.discarded_draws << " discarded draws)\n";
    }
    write_manifest(out_dir, manifest);
}

} // namespace rwsim
