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

#include "rwsim/montecarlo.hpp"

#include "rwsim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace rwsim
{

namespace
{

constexpr std::uint64_t stream_users = 0;
constexpr std::uint64_t stream_pilots = 1;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_failures(int failed, int total, const char *what)
{
    if (failed * 100 > total)
        throw NumericalError(std::string(what) + ": " + std::to_string(failed) + " of " + std::to_string(total) +
                             " drops failed (limit 1%)");
}

std::vector<double> sorted_copy(std::span<const double> samples)
{
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::vector<Vec3> drop_users(const Room &room, const DropSpec &spec, std::span<const AntennaPose> antennas, Rng &rng)
{
    if (spec.k_count < 1)
        throw ConfigError("K must be positive");
    if (!(spec.margin >= 0.0) || !(2.0 * spec.margin < room.lx) || !(2.0 * spec.margin < room.ly))
        throw ConfigError("user margin leaves no floor area");
    if (!(spec.user_height > 0.0 && spec.user_height < room.lz))
        throw ConfigError("user height must lie strictly between floor and ceiling");
    if (!(spec.exclusion >= 0.0))
        throw ConfigError("antenna exclusion distance must be non-negative");

    std::uniform_real_distribution<double> ux(spec.margin, room.lx - spec.margin);
    std::uniform_real_distribution<double> uy(spec.margin, room.ly - spec.margin);
    const double excl2 = spec.exclusion * spec.exclusion;

    std::vector<Vec3> users;
    users.reserve(static_cast<std::size_t>(spec.k_count));
    int rejections = 0;
    while (static_cast<int>(users.size()) < spec.k_count)
    {
        const double x = ux(rng);
        const double y = uy(rng);
        const Vec3 p{x, y, spec.user_height};
        const bool too_close = std::any_of(antennas.begin(), antennas.end(), [&](const AntennaPose &a) {
            const Vec3 d = p - a.position;
            return dot(d, d) < excl2;
        });
        if (too_close)
        {
            if (++rejections > 10000)
                throw ConfigError("user drop infeasible: more than 10^4 consecutive rejections by the antenna "
                                  "exclusion shell");
            continue;
        }
        rejections = 0;
        users.push_back(p);
    }
    return users;
}

void parallel_for(int n, int workers, const std::function<void(int)> &task)
{
    if (n <= 0)
        return;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, n);

    std::atomic<int> next{0};
    std::mutex mu;
    int failed_index = n;
    std::exception_ptr failure;

    auto run = [&] {
        for (int i = next++; i < n; i = next++)
        {
            try
            {
                task(i);
            }
            catch (...)
            {
                std::lock_guard lock(mu);
                if (i < failed_index)
                {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };

    if (workers == 1)
        run();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
}

std::vector<CcdfPoint> empirical_ccdf(std::span<const double> samples, double step_db)
{
    if (samples.empty())
        throw NumericalError("CCDF of an empty sample");
    if (!(step_db > 0.0))
        throw ConfigError("CCDF step must be positive");
    const auto v = sorted_copy(samples);
    if (!(v.front() > 0.0))
        throw NumericalError("CCDF needs positive samples");

    const double lo = std::floor(watt_to_dbm(v.front()) / step_db);
    const double hi = std::ceil(watt_to_dbm(v.back()) / step_db) + 1.0;
    const double n = static_cast<double>(v.size());

    std::vector<CcdfPoint> out;
    out.reserve(static_cast<std::size_t>(hi - lo) + 1);
    for (double i = lo; i <= hi; i += 1.0)
    {
        double p = dbm_to_watt(i * step_db);
        // Grid ends must bracket the sample despite rounding in the dB conversion.
        if (i == lo)
            p = std::min(p, v.front());
        if (i == hi)
            p = std::max(p, std::nextafter(v.back(), std::numeric_limits<double>::infinity()));
        const auto below = std::lower_bound(v.begin(), v.end(), p) - v.begin();
        out.push_back({p, (n - static_cast<double>(below)) / n});
    }
    return out;
}

double empirical_quantile(std::span<const double> samples, double q)
{
    if (samples.empty())
        throw NumericalError("quantile of an empty sample");
    if (!(q > 0.0 && q <= 1.0))
        throw ConfigError("quantile level must lie in (0, 1]");
    auto v = sorted_copy(samples);
    const auto n = static_cast<double>(v.size());
    const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(q * n - 1e-9) - 1.0));
    return v[std::min(idx, v.size() - 1)];
}

std::pair<double, double> median_confidence_interval(std::span<const double> samples, double level)
{
    if (samples.empty())
        throw NumericalError("median interval of an empty sample");
    // Two-sided normal quantile by bisection on erfc.
    const double tail = 0.5 * (1.0 - level);
    double a = 0.0, b = 10.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (a + b);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail ? a : b) = mid;
    }
    const double z = 0.5 * (a + b);
    const auto v = sorted_copy(samples);
    const double n = static_cast<double>(v.size());
    const double half = z * std::sqrt(n) / 2.0;
    const auto lo = static_cast<long>(std::floor(n / 2.0 - half));
    const auto hi = static_cast<long>(std::ceil(n / 2.0 + half));
    const long last = static_cast<long>(v.size()) - 1;
    return {v[static_cast<std::size_t>(std::clamp(lo, 0L, last))], v[static_cast<std::size_t>(std::clamp(hi, 0L, last))]};
}

std::vector<double> PowerCampaignResult::valid_powers() const
{
    std::vector<double> out;
    out.reserve(required_power.size());
    for (double p : required_power)
        if (!std::isnan(p))
            out.push_back(p);
    return out;
}

double PowerCampaignResult::median_power() const
{
    return empirical_quantile(valid_powers(), 0.5);
}

PowerCampaignResult run_power_campaign(TopologyKind kind, const Scenario &scenario, const DropSpec &drops,
                                       const PowerCampaignOptions &options)
{
    if (drops.n_drops < 1)
        throw ConfigError("campaign needs at least one drop");
    if (options.use_estimates)
        options.pilots.validate(drops.k_count);

    const Topology topo =
        build_topology(kind, scenario.room, scenario.m_count, scenario.dims.wavelength, scenario.candelabrum);

    PowerCampaignResult res;
    res.kind = kind;
    res.required_power.assign(static_cast<std::size_t>(drops.n_drops), nan);

    parallel_for(drops.n_drops, options.workers, [&](int d) {
        const auto drop = static_cast<std::uint64_t>(d);
        Rng user_rng = make_rng(drops.seed, {drop, stream_users});
        const auto users = drop_users(scenario.room, drops, topo.poses, user_rng);
        ChannelMatrix g = channel_matrix(topo, users, scenario.dims);
        if (options.use_estimates)
        {
            Rng pilot_rng = make_rng(drops.seed, {drop, stream_pilots});
            g = estimate_channel(g, options.pilots, pilot_rng);
        }
        try
        {
            res.required_power[static_cast<std::size_t>(d)] = zf_required_power(g, options.budget);
        }
        catch (const SingularMatrixError &)
        {
        }
    });

    res.failed_drops = static_cast<int>(std::count_if(res.required_power.begin(), res.required_power.end(),
                                                      [](double p) { return std::isnan(p); }));
    check_failures(res.failed_drops, drops.n_drops, "power campaign");
    const auto valid = res.valid_powers();
    if (valid.empty())
        throw NumericalError("power campaign produced no valid drops");
    res.ccdf = empirical_ccdf(valid, options.ccdf_step_db);
    return res;
}

RateCampaignResult run_rate_campaign(TopologyKind kind, const Scenario &scenario, const DropSpec &drops,
                                     const RateCampaignOptions &options)
{
    if (drops.n_drops < 1)
        throw ConfigError("campaign needs at least one drop");
    if (options.rho_ul_grid.empty() || options.rho_dl_grid.empty())
        throw ConfigError("rate campaign needs non-empty power grids");
    if (!(options.percentile > 0.0 && options.percentile < 1.0))
        throw ConfigError("percentile must lie in (0, 1)");
    for (double rho : options.rho_dl_grid)
        if (!(rho >= 0.0))
            throw ConfigError("downlink powers must be non-negative");
    for (double rho : options.rho_ul_grid)
    {
        PilotConfig cfg = options.pilots;
        cfg.rho_ul = rho;
        cfg.validate(drops.k_count);
    }

    const Topology topo =
        build_topology(kind, scenario.room, scenario.m_count, scenario.dims.wavelength, scenario.candelabrum);

    const std::size_t n_ul = options.rho_ul_grid.size();
    const std::size_t n_dl = options.rho_dl_grid.size();
    const auto k_count = static_cast<std::size_t>(drops.k_count);
    const auto n_drops = static_cast<std::size_t>(drops.n_drops);

    RateCampaignResult res;
    res.kind = kind;
    res.rates.assign(n_ul * n_dl, std::vector<double>(n_drops * k_count, nan));
    std::vector<long> discarded(n_drops, 0);

    parallel_for(drops.n_drops, options.workers, [&](int d) {
        const auto drop = static_cast<std::uint64_t>(d);
        const auto di = static_cast<std::size_t>(d);
        Rng user_rng = make_rng(drops.seed, {drop, stream_users});
        const auto users = drop_users(scenario.room, drops, topo.poses, user_rng);
        const ChannelMatrix g = channel_matrix(topo, users, scenario.dims);

        std::vector<SinrStatistics> stats;
        stats.reserve(n_ul);
        try
        {
            for (std::size_t u = 0; u < n_ul; ++u)
            {
                PilotConfig cfg = options.pilots;
                cfg.rho_ul = options.rho_ul_grid[u];
                Rng pilot_rng = make_rng(drops.seed, {drop, stream_pilots});
                stats.push_back(sinr_statistics(g, cfg, options.n_realizations, pilot_rng));
                discarded[di] += stats.back().discarded;
            }
        }
        catch (const NumericalError &)
        {
            return;
        }

        for (std::size_t u = 0; u < n_ul; ++u)
        {
            PilotConfig cfg = options.pilots;
            cfg.rho_ul = options.rho_ul_grid[u];
            for (std::size_t v = 0; v < n_dl; ++v)
            {
                const Eigen::VectorXd rates =
                    rate_per_user(stats[u].sinr(options.rho_dl_grid[v], options.pilots.sigma2), cfg);
                auto &cell = res.rates[u * n_dl + v];
                for (std::size_t k = 0; k < k_count; ++k)
                    cell[di * k_count + k] = rates(static_cast<Eigen::Index>(k));
            }
        }
    });

    for (std::size_t d = 0; d < n_drops; ++d)
    {
        res.discarded_draws += discarded[d];
        if (std::isnan(res.rates[0][d * k_count]))
            ++res.failed_drops;
    }
    check_failures(res.failed_drops, drops.n_drops, "rate campaign");
    if (res.failed_drops == drops.n_drops)
        throw NumericalError("rate campaign produced no valid drops");

    const double q = 1.0 - options.percentile;
    for (std::size_t u = 0; u < n_ul; ++u)
        for (std::size_t v = 0; v < n_dl; ++v)
        {
            const auto &cell = res.rates[u * n_dl + v];
            std::vector<double> sample;
            sample.reserve(cell.size());
            for (std::size_t d = 0; d < n_drops; ++d)
            {
                if (std::isnan(cell[d * k_count]))
                    continue;
                if (options.statistic == RateStatistic::Pooled)
                    sample.insert(sample.end(), cell.begin() + static_cast<long>(d * k_count),
                                  cell.begin() + static_cast<long>((d + 1) * k_count));
                else
                    sample.push_back(*std::min_element(cell.begin() + static_cast<long>(d * k_count),
                                                       cell.begin() + static_cast<long>((d + 1) * k_count)));
            }
            res.surface.push_back({options.rho_ul_grid[u], options.rho_dl_grid[v], empirical_quantile(sample, q)});
        }
    return res;
}

} // namespace rwsim
