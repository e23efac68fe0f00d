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

#include "rwsim/config.hpp"

#include "rwsim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rwsim
{

namespace
{

using json = nlohmann::json;

// Reads fields out of one JSON object and remembers which keys were consumed.
class ObjectReader
{
public:
    ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError(where() + ": expected a JSON object");
    }

    std::string where(const std::string &key = {}) const
    {
        const std::string p = key.empty() ? path_ : path_ + "/" + key;
        return p.empty() ? "/" : p;
    }

    const json *find(const std::string &key)
    {
        used_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() || it->is_null() ? nullptr : &*it;
    }

    void number(const std::string &key, double &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_number())
                throw ConfigError(where(key) + ": expected a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                throw ConfigError(where(key) + ": must be finite");
        }
    }

    template <typename Int>
    void integer(const std::string &key, Int &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_number_integer())
                throw ConfigError(where(key) + ": expected an integer");
            if constexpr (std::is_unsigned_v<Int>)
            {
                if (v->is_number_unsigned())
                    out = v->get<Int>();
                else if (v->get<long long>() >= 0)
                    out = static_cast<Int>(v->get<long long>());
                else
                    throw ConfigError(where(key) + ": must be non-negative");
            }
            else
                out = v->get<Int>();
        }
    }

    void boolean(const std::string &key, bool &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_boolean())
                throw ConfigError(where(key) + ": expected true or false");
            out = v->get<bool>();
        }
    }

    void numbers(const std::string &key, std::vector<double> &out)
    {
        if (const json *v = find(key))
        {
            if (!v->is_array())
                throw ConfigError(where(key) + ": expected an array of numbers");
            std::vector<double> tmp;
            for (std::size_t i = 0; i < v->size(); ++i)
            {
                if (!(*v)[i].is_number())
                    throw ConfigError(where(key) + "/" + std::to_string(i) + ": expected a number");
                tmp.push_back((*v)[i].get<double>());
            }
            out = std::move(tmp);
        }
    }

    std::string text(const std::string &key, const std::string &fallback)
    {
        if (const json *v = find(key))
        {
            if (!v->is_string())
                throw ConfigError(where(key) + ": expected a string");
            return v->get<std::string>();
        }
        return fallback;
    }

    void reject_unknown() const
    {
        for (const auto &[key, value] : obj_.items())
            if (!used_.count(key))
                throw ConfigError(where(key) + ": unknown key");
    }

private:
    const json &obj_;
    std::string path_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string &path, const std::string &what)
{
    if (!ok)
        throw ConfigError(path + ": " + what);
}

std::string x_dimension_name(XDimension d)
{
    return d == XDimension::SubstrateHeight ? "substrate-height" : "patch-length";
}

std::string statistic_name(RateStatistic s)
{
    return s == RateStatistic::Pooled ? "pooled" : "per-drop-minimum";
}

} // namespace

double RunConfig::thermal_noise_dbm() const
{
    return -174.0 + 10.0 * std::log10(bandwidth) + noise_figure_db;
}

PilotConfig RunConfig::pilots(double rho_ul) const
{
    PilotConfig p;
    p.tau_p = tau_p > 0 ? tau_p : k_count;
    p.tau_c = tau_c > 0 ? tau_c : 10 * k_count;
    p.rho_ul = rho_ul;
    p.sigma2 = sigma2();
    return p;
}

DropSpec RunConfig::drop_spec() const
{
    return {k_count, user_height, margin, exclusion, n_drops, seed};
}

LinkBudget RunConfig::power_budget() const
{
    LinkBudget b;
    b.sigma2 = sigma2();
    b.target_se = target_se;
    b.prelog = prelog_in_power ? pilots(dbm_to_watt(rho_ul_dbm)).prelog() : 1.0;
    return b;
}

json RunConfig::to_json() const
{
    return json{
        {"frequency_hz", frequency},
        {"wavelength_m", wavelength()},
        {"room_m", {room.lx, room.ly, room.lz}},
        {"m", m_count},
        {"k", k_count},
        {"noise_figure_db", noise_figure_db},
        {"bandwidth_hz", bandwidth},
        {"noise_power_dbm", noise_power_dbm},
        {"eps_r", eps_r},
        {"substrate_height_m", substrate_height},
        {"x_dimension", x_dimension_name(x_dimension)},
        {"tau_p", pilots(1.0).tau_p},
        {"tau_c", pilots(1.0).tau_c},
        {"user_height_m", user_height},
        {"margin_m", margin},
        {"exclusion_m", exclusion},
        {"n_drops", n_drops},
        {"seed", seed},
        {"target_se", target_se},
        {"rho_ul_dbm", rho_ul_dbm},
        {"power_from_estimates", power_from_estimates},
        {"prelog_in_power", prelog_in_power},
        {"ccdf_step_db", ccdf_step_db},
        {"rho_ul_grid_dbm", rho_ul_grid_dbm},
        {"rho_dl_grid_dbm", rho_dl_grid_dbm},
        {"percentile", percentile},
        {"n_realizations", n_realizations},
        {"rate_statistic", statistic_name(rate_statistic)},
        {"workers", workers},
        {"candelabrum",
         {{"panels", candelabrum.panels},
          {"grid", candelabrum.grid},
          {"spacing_wavelengths", candelabrum.spacing_wavelengths},
          {"radius_m", candelabrum.radius},
          {"tilt_deg", candelabrum.tilt_deg},
          {"drop_m", candelabrum.drop}}},
    };
}

RunConfig parse_config(const nlohmann::json &doc)
{
    RunConfig c;
    ObjectReader r(doc, "");

    r.number("frequency_hz", c.frequency);
    require(c.frequency > 0.0, "/frequency_hz", "must be positive");
    double wavelength = 0.0;
    r.number("wavelength_m", wavelength);
    if (r.find("wavelength_m"))
        require(std::abs(wavelength - c.wavelength()) <= 1e-9 * c.wavelength(), "/wavelength_m",
                "inconsistent with frequency_hz (expected c / f = " + std::to_string(c.wavelength()) + " m)");

    std::vector<double> room{c.room.lx, c.room.ly, c.room.lz};
    r.numbers("room_m", room);
    require(room.size() == 3, "/room_m", "expected [lx, ly, lz]");
    require(room[0] > 0.0 && room[1] > 0.0 && room[2] > 0.0, "/room_m", "dimensions must be positive");
    c.room = {room[0], room[1], room[2]};

    r.integer("m", c.m_count);
    require(c.m_count >= 1, "/m", "must be >= 1");
    r.integer("k", c.k_count);
    require(c.k_count >= 1, "/k", "must be >= 1");
    require(c.k_count <= c.m_count, "/k", "zero forcing needs K <= M");

    r.number("noise_figure_db", c.noise_figure_db);
    r.number("bandwidth_hz", c.bandwidth);
    require(c.bandwidth > 0.0, "/bandwidth_hz", "must be positive");
    r.number("noise_power_dbm", c.noise_power_dbm);

    r.number("eps_r", c.eps_r);
    require(c.eps_r >= 1.0, "/eps_r", "must be >= 1");
    r.number("substrate_height_m", c.substrate_height);
    require(c.substrate_height > 0.0, "/substrate_height_m", "must be positive");
    const std::string xd = r.text("x_dimension", x_dimension_name(c.x_dimension));
    if (xd == "substrate-height")
        c.x_dimension = XDimension::SubstrateHeight;
    else if (xd == "patch-length")
        c.x_dimension = XDimension::PatchLength;
    else
        throw ConfigError("/x_dimension: expected \"substrate-height\" or \"patch-length\"");

    r.integer("tau_p", c.tau_p);
    r.integer("tau_c", c.tau_c);
    const PilotConfig p = c.pilots(1.0);
    require(p.tau_p >= c.k_count, "/tau_p", "must be >= K");
    require(p.tau_c > p.tau_p, "/tau_c", "must exceed tau_p");

    r.number("user_height_m", c.user_height);
    require(c.user_height > 0.0 && c.user_height < c.room.lz, "/user_height_m", "must lie inside the room");
    r.number("margin_m", c.margin);
    require(c.margin >= 0.0 && 2.0 * c.margin < std::min(c.room.lx, c.room.ly), "/margin_m",
            "must be >= 0 and leave floor area");
    r.number("exclusion_m", c.exclusion);
    require(c.exclusion >= 0.0, "/exclusion_m", "must be >= 0");
    r.integer("n_drops", c.n_drops);
    require(c.n_drops >= 1, "/n_drops", "must be >= 1");
    r.integer("seed", c.seed);

    r.number("target_se", c.target_se);
    require(c.target_se >= 0.0, "/target_se", "must be >= 0");
    r.number("rho_ul_dbm", c.rho_ul_dbm);
    r.boolean("power_from_estimates", c.power_from_estimates);
    r.boolean("prelog_in_power", c.prelog_in_power);
    r.number("ccdf_step_db", c.ccdf_step_db);
    require(c.ccdf_step_db > 0.0, "/ccdf_step_db", "must be positive");

    r.numbers("rho_ul_grid_dbm", c.rho_ul_grid_dbm);
    require(!c.rho_ul_grid_dbm.empty(), "/rho_ul_grid_dbm", "must not be empty");
    r.numbers("rho_dl_grid_dbm", c.rho_dl_grid_dbm);
    require(!c.rho_dl_grid_dbm.empty(), "/rho_dl_grid_dbm", "must not be empty");
    r.number("percentile", c.percentile);
    require(c.percentile > 0.0 && c.percentile < 1.0, "/percentile", "must lie in (0, 1)");
    r.integer("n_realizations", c.n_realizations);
    require(c.n_realizations >= 2, "/n_realizations", "must be >= 2");
    const std::string stat = r.text("rate_statistic", statistic_name(c.rate_statistic));
    if (stat == "pooled")
        c.rate_statistic = RateStatistic::Pooled;
    else if (stat == "per-drop-minimum")
        c.rate_statistic = RateStatistic::PerDropMinimum;
    else
        throw ConfigError("/rate_statistic: expected \"pooled\" or \"per-drop-minimum\"");

    r.integer("workers", c.workers);
    require(c.workers >= 0, "/workers", "must be >= 0");

    if (const json *cand = r.find("candelabrum"))
    {
        ObjectReader cr(*cand, "/candelabrum");
        cr.integer("panels", c.candelabrum.panels);
        cr.integer("grid", c.candelabrum.grid);
        cr.number("spacing_wavelengths", c.candelabrum.spacing_wavelengths);
        cr.number("radius_m", c.candelabrum.radius);
        cr.number("tilt_deg", c.candelabrum.tilt_deg);
        cr.number("drop_m", c.candelabrum.drop);
        cr.reject_unknown();
        require(c.candelabrum.panels >= 1 && c.candelabrum.grid >= 1, "/candelabrum", "needs panels >= 1, grid >= 1");
        require(c.candelabrum.spacing_wavelengths > 0.0, "/candelabrum/spacing_wavelengths", "must be positive");
    }
    r.reject_unknown();

    if (std::abs(c.thermal_noise_dbm() - c.noise_power_dbm) > 0.5)
    {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "noise_power_dbm = %.2f differs from -174 + 10 log10(B) + F = %.2f dBm by more than 0.5 dB",
                      c.noise_power_dbm, c.thermal_noise_dbm());
        c.warnings.emplace_back(buf);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides)
{
    json doc = json::object();
    if (!path.empty())
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file " + path.string());
        try
        {
            doc = json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
        }
    }
    if (!doc.is_object())
        throw ConfigError("/: config document must be a JSON object");

    for (const auto &ov : overrides)
    {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + ov + "' must look like key=value");
        std::string pointer = "/" + ov.substr(0, eq);
        for (auto &ch : pointer)
            if (ch == '.')
                ch = '/';
        const std::string raw = ov.substr(eq + 1);
        json value;
        try
        {
            value = json::parse(raw);
        }
        catch (const json::parse_error &)
        {
            value = raw;
        }
        try
        {
            doc[json::json_pointer(pointer)] = value;
        }
        catch (const json::exception &e)
        {
            throw ConfigError("override '" + ov + "': " + e.what());
        }
    }
    return parse_config(doc);
}

std::string config_hash(const nlohmann::json &resolved)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : resolved.dump())
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace rwsim
