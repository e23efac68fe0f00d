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
#include "rwsim/channel.hpp"
#include "rwsim/geometry.hpp"
#include "rwsim/precoding.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rwsim
{

// Power unit conversions; P_dBm = 10 log10(P_W * 1000).
inline double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt * 1e3); }

struct DropSpec
{
    int k_count = 200;
    double user_height = 1.5; // m
    double margin = 1.0;      // minimum distance to the walls [m]
    double exclusion = 0.5;   // minimum distance to any antenna [m]
    int n_drops = 10000;
    std::uint64_t seed = 1;
};

/// K users i.i.d. uniform over the floor rectangle inset by `margin`, at `user_height`.
/// Candidates within `exclusion` of an antenna are redrawn; more than 10^4 consecutive
/// rejections throw ConfigError.
std::vector<Vec3> drop_users(const Room &room, const DropSpec &spec, std::span<const AntennaPose> antennas, Rng &rng);

// Everything that stays fixed across the drops of a campaign.
struct Scenario
{
    Room room;
    int m_count = 512;
    PatchDims dims;
    CandelabrumLayout candelabrum;
};

/// Runs `task(i)` for i in [0, n) on `workers` threads (0 = hardware concurrency).
/// The first exception by index is rethrown after all threads finish.
void parallel_for(int n, int workers, const std::function<void(int)> &task);

struct CcdfPoint
{
    double power = 0.0; // W
    double probability = 0.0;
};

/// Pr{X >= p} on a grid uniform in dB with `step_db` spacing. The grid starts at or below
/// the smallest sample (probability 1) and ends strictly above the largest (probability 0).
std::vector<CcdfPoint> empirical_ccdf(std::span<const double> samples, double step_db);

// Inverse empirical CDF: the smallest sample x with F(x) >= q, q in (0, 1].
double empirical_quantile(std::span<const double> samples, double q);

// Order-statistic confidence interval for the median (normal approximation to the binomial).
std::pair<double, double> median_confidence_interval(std::span<const double> samples, double level = 0.95);

struct PowerCampaignOptions
{
    LinkBudget budget;
    PilotConfig pilots;
    bool use_estimates = true; // size power from G_hat (pilot noise) rather than G
    double ccdf_step_db = 0.1;
    int workers = 0;
};

struct PowerCampaignResult
{
    TopologyKind kind = TopologyKind::Candelabrum;
    std::vector<double> required_power; // per drop [W], NaN where the drop failed
    int failed_drops = 0;
    std::vector<CcdfPoint> ccdf;

    std::vector<double> valid_powers() const;
    double median_power() const;
};

/// Per drop: place users, build G, optionally estimate it, size ZF power. Drops hitting a
/// singular Gram matrix are excluded and counted; more than 1% throws NumericalError.
PowerCampaignResult run_power_campaign(TopologyKind kind, const Scenario &scenario, const DropSpec &drops,
                                       const PowerCampaignOptions &options);

enum class RateStatistic
{
    Pooled,         // quantile over all users of all drops
    PerDropMinimum, // quantile over the worst user of each drop
};

struct RateCampaignOptions
{
    std::vector<double> rho_ul_grid; // W
    std::vector<double> rho_dl_grid; // W
    PilotConfig pilots;              // rho_ul is overridden per grid row
    double percentile = 0.999;       // reported rate is the (1 - percentile) quantile
    int n_realizations = 200;
    RateStatistic statistic = RateStatistic::Pooled;
    int workers = 0;
};

struct RateCell
{
    double rho_ul = 0.0;
    double rho_dl = 0.0;
    double rate = 0.0; // bit/s/Hz
};

struct RateCampaignResult
{
    TopologyKind kind = TopologyKind::Candelabrum;
    std::vector<RateCell> surface; // rho_ul-major
    // rates[cell][drop * K + k], NaN for failed drops.
    std::vector<std::vector<double>> rates;
    int failed_drops = 0;
    long discarded_draws = 0;
};

/// For each (rho_ul, rho_dl) cell, Monte Carlo SINR and rate of every user in every drop,
/// reduced to the (1 - percentile) quantile. Pilot noise uses the same random stream for
/// every rho_ul of a drop, and the SINR moments are shared by all rho_dl of a row.
RateCampaignResult run_rate_campaign(TopologyKind kind, const Scenario &scenario, const DropSpec &drops,
                                     const RateCampaignOptions &options);

} // namespace rwsim
