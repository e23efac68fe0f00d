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

#include "rwsim/channel.hpp"

#include "rwsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace rwsim
{

void PilotConfig::validate(Eigen::Index k_count) const
{
    if (tau_p < k_count)
        throw ConfigError("pilot length tau_p = " + std::to_string(tau_p) + " is shorter than K = " +
                          std::to_string(k_count));
    if (tau_c <= tau_p)
        throw ConfigError("coherence block tau_c must exceed tau_p");
    if (!(rho_ul > 0.0) || !std::isfinite(rho_ul))
        throw ConfigError("uplink pilot power must be positive");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw ConfigError("noise power must be non-negative");
}

namespace
{

// Gain for a target at `local` in the element frame, |local| = r > 0.
inline std::complex<double> gain_from_local(Vec3 local, double r, const PatchDims &dims)
{
    const double pattern = pattern_factor_local(local.x, local.y, local.z, r, dims);
    if (pattern == 0.0)
        return {0.0, 0.0};
    const double amplitude = dims.alpha * dims.wavelength / (4.0 * std::numbers::pi * r) * pattern;
    // Reduce r / lambda to its fractional part before scaling by 2 pi.
    const double cycles = r / dims.wavelength;
    const double phase = -2.0 * std::numbers::pi * (cycles - std::floor(cycles));
    return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
}

} // namespace

std::complex<double> los_gain(const AntennaPose &pose, Vec3 user, const PatchDims &dims)
{
    const Vec3 local = pose.to_local(user);
    const double r = norm(local);
    if (r == 0.0)
        throw GeometryError("degenerate geometry: user coincides with antenna position");
    return gain_from_local(local, r, dims);
}

ChannelMatrix channel_matrix(const Topology &topology, std::span<const Vec3> users, const PatchDims &dims)
{
    const auto m_count = static_cast<Eigen::Index>(topology.poses.size());
    const auto k_count = static_cast<Eigen::Index>(users.size());
    if (k_count < 1)
        throw ConfigError("channel matrix needs at least one user");

    std::vector<Vec3> lateral(topology.poses.size());
    for (std::size_t m = 0; m < lateral.size(); ++m)
        lateral[m] = topology.poses[m].lateral();

    ChannelMatrix g{CMatrix(m_count, k_count)};
    for (Eigen::Index k = 0; k < k_count; ++k)
    {
        const Vec3 user = users[static_cast<std::size_t>(k)];
        for (Eigen::Index m = 0; m < m_count; ++m)
        {
            const auto &pose = topology.poses[static_cast<std::size_t>(m)];
            const Vec3 d = user - pose.position;
            const Vec3 local{dot(d, pose.boresight), dot(d, lateral[static_cast<std::size_t>(m)]), dot(d, pose.up)};
            const double r = norm(local);
            if (r == 0.0)
                throw GeometryError("degenerate geometry: user coincides with antenna position (antenna " +
                                    std::to_string(m) + ", user " + std::to_string(k) + ")");
            g.entries(m, k) = gain_from_local(local, r, dims);
        }
    }
    return g;
}

ChannelMatrix estimate_channel(const ChannelMatrix &g_true, const PilotConfig &cfg, Rng &rng)
{
    cfg.validate(g_true.k_count());
    if (cfg.sigma2 == 0.0)
        return g_true;

    ComplexGaussian noise(cfg.error_variance());
    ChannelMatrix est = g_true;
    for (Eigen::Index k = 0; k < est.k_count(); ++k)
        for (Eigen::Index m = 0; m < est.m_count(); ++m)
            est.entries(m, k) += noise(rng);
    return est;
}

ChannelMatrix estimate_from_despread_noise(const ChannelMatrix &g_true, const PilotConfig &cfg,
                                           const CMatrix &despread_noise)
{
    cfg.validate(g_true.k_count());
    if (despread_noise.rows() != g_true.m_count() || despread_noise.cols() != g_true.k_count())
        throw ConfigError("de-spread noise must be M x K");
    return {g_true.entries + despread_noise / std::sqrt(cfg.rho_ul * cfg.tau_p)};
}

CMatrix dft_pilot_book(int tau_p, int k_count)
{
    if (k_count < 1 || tau_p < k_count)
        throw ConfigError("pilot book needs 1 <= K <= tau_p");
    CMatrix phi(tau_p, k_count);
    const double scale = 1.0 / std::sqrt(static_cast<double>(tau_p));
    for (int t = 0; t < tau_p; ++t)
        for (int k = 0; k < k_count; ++k)
        {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(t) * k) % tau_p) /
                                 tau_p;
            phi(t, k) = std::polar(scale, angle);
        }
    return phi;
}

ChannelMatrix estimate_with_pilots(const ChannelMatrix &g_true, const PilotConfig &cfg, const CMatrix &pilots,
                                   const CMatrix &noise)
{
    cfg.validate(g_true.k_count());
    if (pilots.rows() != cfg.tau_p || pilots.cols() != g_true.k_count())
        throw ConfigError("pilot book must be tau_p x K");
    if (noise.rows() != g_true.m_count() || noise.cols() != cfg.tau_p)
        throw ConfigError("pilot-phase noise must be M x tau_p");

    const double amp = std::sqrt(cfg.rho_ul * cfg.tau_p);
    const CMatrix received = amp * g_true.entries * pilots.adjoint() + noise;
    const CMatrix despread = received * pilots;
    return {despread / amp};
}

void write_channel_csv(std::ostream &os, const ChannelMatrix &g)
{
    os << "M,K\n" << g.m_count() << ',' << g.k_count() << "\nm,k,re,im\n";
    char buf[128];
    for (Eigen::Index m = 0; m < g.m_count(); ++m)
        for (Eigen::Index k = 0; k < g.k_count(); ++k)
        {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n", static_cast<long>(m), static_cast<long>(k),
                          g.entries(m, k).real(), g.entries(m, k).imag());
            os << buf;
        }
}

namespace
{

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_field(std::string_view s, int line_no)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("channel CSV line " + std::to_string(line_no) + ": cannot parse '" + std::string(s) + "'");
    return value;
}

} // namespace

ChannelMatrix read_channel_csv(std::istream &is)
{
    std::string line;
    int line_no = 0;
    auto next = [&]() -> std::string_view {
        if (!std::getline(is, line))
            throw IoError("channel CSV truncated after line " + std::to_string(line_no));
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return line;
    };

    if (next() != "M,K")
        throw IoError("channel CSV must start with 'M,K'");
    const auto dims = split_fields(next());
    if (dims.size() != 2)
        throw IoError("channel CSV line 2 must hold M,K");
    const long m_count = parse_field<long>(dims[0], line_no);
    const long k_count = parse_field<long>(dims[1], line_no);
    if (m_count < 1 || k_count < 1)
        throw IoError("channel CSV dimensions must be positive");
    if (next() != "m,k,re,im")
        throw IoError("channel CSV line 3 must be 'm,k,re,im'");

    ChannelMatrix g{CMatrix(m_count, k_count)};
    std::vector<char> seen(static_cast<std::size_t>(m_count * k_count), 0);
    for (long n = 0; n < m_count * k_count; ++n)
    {
        const auto f = split_fields(next());
        if (f.size() != 4)
            throw IoError("channel CSV line " + std::to_string(line_no) + ": expected 4 fields");
        const long m = parse_field<long>(f[0], line_no);
        const long k = parse_field<long>(f[1], line_no);
        if (m < 0 || m >= m_count || k < 0 || k >= k_count)
            throw IoError("channel CSV line " + std::to_string(line_no) + ": index out of range");
        auto &flag = seen[static_cast<std::size_t>(m * k_count + k)];
        if (flag)
            throw IoError("channel CSV line " + std::to_string(line_no) + ": duplicate entry");
        flag = 1;
        g.entries(m, k) = {parse_field<double>(f[2], line_no), parse_field<double>(f[3], line_no)};
    }
    return g;
}

} // namespace rwsim
