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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   rwsim_acceptance [criterion numbers...] [--power-drops N]
//
// Without numbers every criterion runs. --power-drops shrinks the power campaign for
// quick local checks; the reported line then says so and the criterion cannot pass.

#include "rwsim/commands.hpp"
#include "rwsim/config.hpp"
#include "rwsim/errors.hpp"
#include "rwsim/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rwsim;
namespace fs = std::filesystem;

namespace
{

// Reference values evaluated independently from the closed-form design equations
// and a dense numerical integration of the pattern.
constexpr double oracle_width = 0.03169328455231937;
constexpr double oracle_eps_reff = 9.235184806922907;
constexpr double oracle_length = 0.02332566179986249;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// |a - b| within half a unit in the `digits`-th significant digit of the reference b.
bool agrees_to_digits(double a, double b, int digits)
{
    const double e = std::floor(std::log10(std::abs(b)));
    return std::abs(a - b) <= 0.5 * std::pow(10.0, e - (digits - 1));
}

CMatrix random_matrix(Eigen::Index m, Eigen::Index k, Rng &rng, double variance)
{
    ComplexGaussian cn(variance);
    CMatrix g(m, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            g(i, j) = cn(rng);
    return g;
}

Outcome patch_design()
{
    const PatchDims d = design_patch(SubstrateSpec{10.2, 2e9, 1.588e-3});
    const bool ok = agrees_to_digits(d.width, oracle_width, 4) && agrees_to_digits(d.eps_reff, oracle_eps_reff, 4) &&
                    agrees_to_digits(d.length, oracle_length, 4);
    return {ok, fmt("W = %.4f mm, eps_reff = %.4f, L = %.4f mm", d.width * 1e3, d.eps_reff, d.length * 1e3)};
}

Outcome gain_normalization_check()
{
    const PatchDims d = design_patch(SubstrateSpec{});

    // Midpoint rule over the whole sphere, independent of the Gauss-Legendre path.
    const int nt = 2000, np = 4000;
    const double dt = std::numbers::pi / nt, dp = 2.0 * std::numbers::pi / np;
    double total = 0.0;
    for (int i = 0; i < nt; ++i)
    {
        const double theta = (i + 0.5) * dt;
        double row = 0.0;
        for (int j = 0; j < np; ++j)
            row += gain(theta, -std::numbers::pi + (j + 0.5) * dp, d);
        total += row * std::sin(theta);
    }
    const double mean_gain = total * dt * dp / (4.0 * std::numbers::pi);

    // alpha^2 = 1 / E{pattern^2} over uniform directions; the back half is zero, so
    // sampling the front half and halving is exact.
    Rng rng(20240501);
    std::normal_distribution<double> n01;
    const int samples = 10'000'000;
    double acc = 0.0;
    for (int s = 0; s < samples; ++s)
    {
        const double x = std::abs(n01(rng)), y = n01(rng), z = n01(rng);
        const double r = std::sqrt(x * x + y * y + z * z);
        const double pf = pattern_factor_local(x, y, z, r, d);
        acc += pf * pf;
    }
    const double alpha2_mc = 1.0 / (0.5 * acc / samples);
    const double alpha2 = d.alpha * d.alpha;

    const bool ok = std::abs(mean_gain - 1.0) <= 1e-4 && agrees_to_digits(alpha2_mc, alpha2, 3);
    return {ok, fmt("(1/4pi) int G dOmega = %.7f, alpha^2 quadrature %.6f vs Monte Carlo %.6f", mean_gain, alpha2,
                    alpha2_mc)};
}

Outcome zf_properties()
{
    Rng rng(31);
    std::uniform_int_distribution<int> kdist(1, 8), extra(0, 24), mdist(2, 8);
    double worst_diag = 0.0, worst_norm = 0.0, worst_trace = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const int k = kdist(rng);
        const int m = k + extra(rng);
        const ChannelMatrix g{random_matrix(m, k, rng, 1e-6)};
        const Precoder p = zf_precoder(g);
        const double scale = 1.0 / std::sqrt(p.trace);
        const CMatrix eff = g.entries.transpose() * p.columns;
        const CMatrix target = CMatrix::Identity(k, k) * scale;
        worst_diag = std::max(worst_diag, (eff - target).cwiseAbs().maxCoeff() / scale);
        worst_norm = std::max(worst_norm, std::abs(p.columns.squaredNorm() - 1.0));
    }
    for (int i = 0; i < 1000; ++i)
    {
        const CMatrix g = random_matrix(mdist(rng), 2, rng, 1e-6);
        const CMatrix b = g.transpose() * g.conjugate();
        const std::complex<double> det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        const double oracle = ((b(0, 0) + b(1, 1)) / det).real();
        worst_trace = std::max(worst_trace, std::abs(zf_trace(g) - oracle) / oracle);
    }
    const bool ok = worst_diag <= 1e-8 && worst_norm <= 1e-10 && worst_trace <= 1e-10;
    return {ok, fmt("max |G^T A - I/sqrt(t)| rel %.2e, max |sum|a_k|^2 - 1| %.2e, max trace rel err %.2e", worst_diag,
                    worst_norm, worst_trace)};
}

Outcome ls_estimation()
{
    const int m = 8, k = 4, n = 100'000;
    const PilotConfig cfg{4, 40, 1e-9, 6.309573444801929e-13};
    const double var = cfg.error_variance();
    Rng rng(41);
    // Channel entries on the same scale as the estimation error.
    const ChannelMatrix g{random_matrix(m, k, rng, var)};

    CMatrix sum = CMatrix::Zero(m, k);
    double sq = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const ChannelMatrix e = estimate_channel(g, cfg, rng);
        const CMatrix err = e.entries - g.entries;
        sum += e.entries;
        sq += err.squaredNorm();
    }
    const double bias = (sum / n - g.entries).norm() / g.entries.norm();
    const double var_ratio = sq / (static_cast<double>(n) * m * k) / var;

    double worst_path = 0.0;
    for (auto [tau_p, kk] : {std::pair{4, 4}, std::pair{7, 3}, std::pair{200, 200}})
    {
        const PilotConfig pc{tau_p, 10 * tau_p, 1e-3, 6.309573444801929e-13};
        const ChannelMatrix gt{random_matrix(16, kk, rng, 1e-6)};
        const CMatrix noise = random_matrix(16, tau_p, rng, pc.sigma2);
        const CMatrix phi = dft_pilot_book(tau_p, kk);
        const auto explicit_path = estimate_with_pilots(gt, pc, phi, noise);
        const auto shortcut = estimate_from_despread_noise(gt, pc, noise * phi);
        worst_path = std::max(worst_path, (explicit_path.entries - shortcut.entries).cwiseAbs().maxCoeff());
    }
    const bool ok = bias <= 0.01 && std::abs(var_ratio - 1.0) <= 0.01 && worst_path <= 1e-10;
    return {ok, fmt("relative bias %.2e, error variance / expected %.5f, explicit vs shortcut %.2e", bias, var_ratio,
                    worst_path)};
}

struct PowerLayouts
{
    std::map<TopologyKind, double> median_dbm;
    int drops = 0;
    double seconds = 0.0;
};

PowerLayouts run_power_layouts(int drops)
{
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg = load_config({});
    cfg.n_drops = drops;
    Scenario s;
    s.room = cfg.room;
    s.m_count = cfg.m_count;
    s.dims = design_patch(cfg.substrate(), cfg.x_dimension);
    s.candelabrum = cfg.candelabrum;
    PowerCampaignOptions opt;
    opt.budget = cfg.power_budget();
    opt.pilots = cfg.pilots(dbm_to_watt(cfg.rho_ul_dbm));
    opt.use_estimates = cfg.power_from_estimates;

    PowerLayouts out;
    out.drops = drops;
    for (auto kind : all_topologies)
    {
        const auto res = run_power_campaign(kind, s, cfg.drop_spec(), opt);
        out.median_dbm[kind] = watt_to_dbm(res.median_power());
        std::fprintf(stderr, "  %-20s median %8.3f dBm (%d failed drops)\n", std::string(topology_name(kind)).c_str(),
                     out.median_dbm[kind], res.failed_drops);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Outcome power_ordering(const PowerLayouts &f)
{
    const auto &med = f.median_dbm;
    const double cand = med.at(TopologyKind::Candelabrum);
    double strongest_strip = -HUGE_VAL;
    for (auto [kind, v] : med)
        if (kind != TopologyKind::Candelabrum)
            strongest_strip = std::max(strongest_strip, v);
    const double gap_cand = cand - strongest_strip;
    const double gap_single = med.at(TopologyKind::SingleStrip1Wall) - med.at(TopologyKind::SingleStrip4Walls);
    const double gap_double = med.at(TopologyKind::DoubleStrip1Wall) - med.at(TopologyKind::DoubleStrip4Walls);
    const double gap_quad = med.at(TopologyKind::QuadStrip1Wall) - med.at(TopologyKind::QuadStrip4Walls);
    const bool full = f.drops == 10000;
    const bool ok = full && gap_cand >= 3.0 && gap_single >= 3.0 && gap_double >= 3.0 && gap_quad >= 3.0 &&
                    f.seconds < 1800.0;
    std::string detail = fmt("%d drops; candelabrum %.2f dBm, %.2f dB above the highest strip; 1-wall minus 4-wall "
                             "at the median: single %.2f dB, double %.2f dB, quad %.2f dB",
                             f.drops, cand, gap_cand, gap_single, gap_double, gap_quad);
    detail += fmt("; campaign %.0f s of 1800 s", f.seconds);
    if (!full)
        detail += " (reduced drop count)";
    return {ok, detail};
}

Outcome power_anchor(const PowerLayouts &f)
{
    const double med = f.median_dbm.at(TopologyKind::QuadStrip4Walls);
    return {f.drops == 10000 && std::abs(med - (-23.0)) <= 5.0,
            fmt("quad-strip-4walls median %.2f dBm (target -23 +/- 5 dBm, %d drops)", med, f.drops)};
}

Outcome rate_surface_properties()
{
    RunConfig cfg = load_config({}, {"m=128", "k=20", "n_drops=500"});
    Scenario s;
    s.room = cfg.room;
    s.m_count = cfg.m_count;
    s.dims = design_patch(cfg.substrate(), cfg.x_dimension);
    RateCampaignOptions opt;
    for (double v : cfg.rho_ul_grid_dbm)
        opt.rho_ul_grid.push_back(dbm_to_watt(v));
    for (double v : cfg.rho_dl_grid_dbm)
        opt.rho_dl_grid.push_back(dbm_to_watt(v));
    opt.pilots = cfg.pilots(dbm_to_watt(cfg.rho_ul_dbm));
    opt.percentile = cfg.percentile;
    opt.n_realizations = cfg.n_realizations;
    opt.statistic = cfg.rate_statistic;

    const auto res = run_rate_campaign(TopologyKind::DoubleStrip4Walls, s, cfg.drop_spec(), opt);
    const std::size_t nu = opt.rho_ul_grid.size(), nd = opt.rho_dl_grid.size();
    bool monotone = true;
    std::ostringstream grid;
    for (std::size_t u = 0; u < nu; ++u)
    {
        grid << (u ? "; " : "") << fmt("ul %.0f dBm:", cfg.rho_ul_grid_dbm[u]);
        for (std::size_t d = 0; d < nd; ++d)
        {
            const double r = res.surface[u * nd + d].rate;
            grid << fmt(" %.3f", r);
            if (d > 0 && r < res.surface[u * nd + d - 1].rate)
                monotone = false;
        }
    }
    double worst_top = 0.0;
    for (std::size_t d = 0; d < nd; ++d)
    {
        const double hi = res.surface[(nu - 1) * nd + d].rate;
        const double lo = res.surface[(nu - 2) * nd + d].rate;
        worst_top = std::max(worst_top, std::abs(hi - lo) / std::max(hi, lo));
    }
    const bool ok = monotone && worst_top <= 0.02;
    return {ok, fmt("%s in rho_dl, top two rho_ul rows differ by at most %.2f%%; rates [bit/s/Hz] %s",
                    monotone ? "non-decreasing" : "NOT monotone", 100.0 * worst_top, grid.str().c_str())};
}

std::map<std::string, std::string> read_csvs(const fs::path &dir)
{
    std::map<std::string, std::string> out;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv")
        {
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            out[entry.path().filename().string()] = ss.str();
        }
    return out;
}

Outcome reproducibility()
{
    const fs::path root = fs::temp_directory_path() / "rwsim_acceptance_repro";
    std::ostringstream log;
    std::vector<std::map<std::string, std::string>> runs;
    for (int workers : {1, 4, 8})
    {
        const fs::path dir = root / std::to_string(workers);
        fs::remove_all(dir);
        RunConfig power = load_config({}, {"n_drops=40", "seed=99"});
        power.workers = workers;
        cmd_power_ccdf(power, select_topologies("all"), dir / "power", log);
        RunConfig rate =
            load_config({}, {"m=128", "k=20", "candelabrum.grid=4", "n_drops=16", "n_realizations=50", "seed=99"});
        rate.workers = workers;
        cmd_rate_map(rate, select_topologies("all"), dir / "rate", log);
        auto files = read_csvs(dir / "power");
        for (auto &[name, body] : read_csvs(dir / "rate"))
            files[name] = std::move(body);
        runs.push_back(std::move(files));
    }
    fs::remove_all(root);
    const bool ok = runs[0].size() == 14 && runs[0] == runs[1] && runs[0] == runs[2];
    return {ok, fmt("%zu CSV files per run, byte-identical across 1, 4 and 8 workers: %s", runs[0].size(),
                    ok ? "yes" : "no")};
}

} // namespace

int main(int argc, char **argv)
{
    std::set<int> selected;
    int power_drops = 10000;
    for (int i = 1; i < argc; ++i)
    {
        const std::string a = argv[i];
        if (a == "--power-drops" && i + 1 < argc)
            power_drops = std::atoi(argv[++i]);
        else
            selected.insert(std::atoi(a.c_str()));
    }
    auto wanted = [&](int c) { return selected.empty() || selected.count(c) > 0; };

    int failures = 0;
    auto report = [&](int id, const char *name, double limit_s, const std::function<Outcome()> &body) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = body();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit_s > 0.0 && secs >= limit_s)
        {
            o.pass = false;
            o.detail += fmt(" (over the %.0f s limit)", limit_s);
        }
        if (!o.pass)
            ++failures;
        std::printf("[%s] criterion %d [PRIMARY] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    if (wanted(1))
        report(1, "patch design", 1.0, patch_design);
    if (wanted(2))
        report(2, "gain normalization", 60.0, gain_normalization_check);
    if (wanted(3))
        report(3, "perfect-CSI zero forcing", 60.0, zf_properties);
    if (wanted(4))
        report(4, "LS channel estimation", 120.0, ls_estimation);
    if (wanted(5) || wanted(6))
    {
        PowerLayouts campaign;
        std::string error;
        try
        {
            campaign = run_power_layouts(power_drops);
        }
        catch (const std::exception &e)
        {
            error = e.what();
        }
        auto guarded = [&](auto check) {
            return [&, check]() -> Outcome {
                if (!error.empty())
                    return {false, "campaign failed: " + error};
                return check(campaign);
            };
        };
        if (wanted(5))
        {
            std::printf("(power campaign over all topologies took %.1f s)\n", campaign.seconds);
            report(5, "required power ordering", 0.0, guarded(power_ordering));
        }
        if (wanted(6))
            report(6, "required power anchor", 0.0, guarded(power_anchor));
    }
    if (wanted(7))
        report(7, "rate surface properties", 1800.0, rate_surface_properties);
    if (wanted(8))
        report(8, "reproducibility across worker counts", 0.0, reproducibility);

    std::printf("%d of %d selected criteria failed\n", failures, static_cast<int>(selected.empty() ? 8 : selected.size()));
    return failures == 0 ? 0 : 1;
}
