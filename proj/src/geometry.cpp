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

#include "rwsim/geometry.hpp"

#include "rwsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace rwsim
{

Spherical cart_to_sph(Vec3 p)
{
    const double r = norm(p);
    if (r == 0.0)
        return {};

    const double theta = std::acos(std::clamp(p.z / r, -1.0, 1.0));
    double phi = (p.x == 0.0 && p.y == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    if (phi >= std::numbers::pi)
        phi = -std::numbers::pi;
    return {r, theta, phi};
}

Vec3 sph_to_cart(const Spherical &s)
{
    const double st = std::sin(s.theta);
    return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi), s.r * std::cos(s.theta)};
}

Vec3 AntennaPose::to_local(Vec3 target) const
{
    const Vec3 d = target - position;
    return {dot(d, boresight), dot(d, lateral()), dot(d, up)};
}

Spherical to_local_spherical(const AntennaPose &pose, Vec3 target)
{
    if (target == pose.position)
        throw GeometryError("degenerate geometry: target coincides with antenna position");
    return cart_to_sph(pose.to_local(target));
}

bool Room::contains(Vec3 p, double tol) const
{
    return p.x >= -tol && p.x <= lx + tol && p.y >= -tol && p.y <= ly + tol && p.z >= -tol && p.z <= lz + tol;
}

namespace
{

struct KindName
{
    TopologyKind kind;
    std::string_view name;
};

constexpr std::array<KindName, 7> kind_names{{
    {TopologyKind::Candelabrum, "candelabrum"},
    {TopologyKind::SingleStrip1Wall, "single-strip-1wall"},
    {TopologyKind::SingleStrip4Walls, "single-strip-4walls"},
    {TopologyKind::DoubleStrip1Wall, "double-strip-1wall"},
    {TopologyKind::DoubleStrip4Walls, "double-strip-4walls"},
    {TopologyKind::QuadStrip1Wall, "quad-strip-1wall"},
    {TopologyKind::QuadStrip4Walls, "quad-strip-4walls"},
}};

struct Wall
{
    const char *name;
    Vec3 center_xy; // z ignored
    Vec3 normal;    // inward
    double width;
};

std::array<Wall, 4> room_walls(const Room &room)
{
    return {{
        {"wall y=0", {0.5 * room.lx, 0.0, 0.0}, {0.0, 1.0, 0.0}, room.lx},
        {"wall x=lx", {room.lx, 0.5 * room.ly, 0.0}, {-1.0, 0.0, 0.0}, room.ly},
        {"wall y=ly", {0.5 * room.lx, room.ly, 0.0}, {0.0, -1.0, 0.0}, room.lx},
        {"wall x=0", {0.0, 0.5 * room.ly, 0.0}, {1.0, 0.0, 0.0}, room.ly},
    }};
}

Topology build_strips(TopologyKind kind, const Room &room, int m, double wavelength)
{
    const StripLayout layout = strip_layout(kind);
    const int per_strip_total = layout.walls * layout.strips;
    if (m % per_strip_total != 0)
        throw ConfigError("M = " + std::to_string(m) + " does not split evenly over " + std::to_string(layout.walls) +
                          " wall(s) x " + std::to_string(layout.strips) + " strip(s)");

    const int n = m / per_strip_total;
    const double spacing = layout.spacing_wavelengths * wavelength;
    const double span = (n - 1) * spacing;
    const Vec3 up{0.0, 0.0, 1.0};
    const auto walls = room_walls(room);

    Topology topo{kind, {}};
    topo.poses.reserve(static_cast<std::size_t>(m));
    for (int w = 0; w < layout.walls; ++w)
    {
        const Wall &wall = walls[static_cast<std::size_t>(w)];
        if (span > wall.width)
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "strip of %d elements at %.4g m spacing spans %.6g m, exceeds %s width %.6g m",
                          n, spacing, span, wall.name, wall.width);
            throw ConfigError(buf);
        }
        const Vec3 tangent = cross(wall.normal, up);
        for (int s = 0; s < layout.strips; ++s)
        {
            const double z = 0.5 * room.lz + (s - 0.5 * (layout.strips - 1)) * layout.strip_pitch;
            if (z < 0.0 || z > room.lz)
                throw ConfigError(std::string("strip height outside room on ") + wall.name);
            for (int i = 0; i < n; ++i)
            {
                const double t = (i - 0.5 * (n - 1)) * spacing;
                Vec3 p = wall.center_xy + t * tangent;
                p.z = z;
                topo.poses.push_back({p, wall.normal, up});
            }
        }
    }
    return topo;
}

Topology build_candelabrum(const Room &room, int m, double wavelength, const CandelabrumLayout &c)
{
    if (c.panels < 1 || c.grid < 1)
        throw ConfigError("candelabrum needs at least one panel of at least one element");
    if (c.panels * c.grid * c.grid != m)
        throw ConfigError("candelabrum of " + std::to_string(c.panels) + " panels x " + std::to_string(c.grid) + "x" +
                          std::to_string(c.grid) + " elements does not give M = " + std::to_string(m));
    if (!(c.tilt_deg > -90.0 && c.tilt_deg < 90.0))
        throw ConfigError("candelabrum tilt must lie in (-90, 90) degrees");

    const double spacing = c.spacing_wavelengths * wavelength;
    const double tilt = c.tilt_deg * std::numbers::pi / 180.0;
    const Vec3 axis{0.5 * room.lx, 0.5 * room.ly, room.lz - c.drop};
    const Vec3 zhat{0.0, 0.0, 1.0};

    Topology topo{TopologyKind::Candelabrum, {}};
    topo.poses.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < c.panels; ++k)
    {
        const double az = 2.0 * std::numbers::pi * k / c.panels;
        const Vec3 horiz{std::cos(az), std::sin(az), 0.0};
        const Vec3 boresight = std::cos(tilt) * horiz - std::sin(tilt) * zhat;
        const Vec3 up = std::sin(tilt) * horiz + std::cos(tilt) * zhat;
        const Vec3 lateral = cross(up, boresight);
        const Vec3 center = axis + c.radius * horiz;
        for (int row = 0; row < c.grid; ++row)
            for (int col = 0; col < c.grid; ++col)
            {
                const Vec3 p = center + ((col - 0.5 * (c.grid - 1)) * spacing) * lateral +
                               ((row - 0.5 * (c.grid - 1)) * spacing) * up;
                if (!room.contains(p))
                    throw ConfigError("candelabrum element falls outside the room; reduce radius or increase drop");
                topo.poses.push_back({p, boresight, up});
            }
    }
    return topo;
}

} // namespace

std::string_view topology_name(TopologyKind kind)
{
    for (const auto &kn : kind_names)
        if (kn.kind == kind)
            return kn.name;
    return "unknown";
}

TopologyKind parse_topology(std::string_view name)
{
    for (const auto &kn : kind_names)
        if (kn.name == name)
            return kn.kind;
    throw ConfigError("unknown topology '" + std::string(name) + "'");
}

StripLayout strip_layout(TopologyKind kind)
{
    switch (kind)
    {
    case TopologyKind::SingleStrip1Wall: return {1, 1, 0.5, 2.0};
    case TopologyKind::SingleStrip4Walls: return {4, 1, 2.0, 2.0};
    case TopologyKind::DoubleStrip1Wall: return {1, 2, 1.0, 2.0};
    case TopologyKind::DoubleStrip4Walls: return {4, 2, 4.0, 2.0};
    case TopologyKind::QuadStrip1Wall: return {1, 4, 2.0, 2.0};
    case TopologyKind::QuadStrip4Walls: return {4, 4, 8.0, 2.0};
    case TopologyKind::Candelabrum: break;
    }
    throw ConfigError("candelabrum is not a strip layout");
}

Topology build_topology(TopologyKind kind, const Room &room, int m, double wavelength,
                        const CandelabrumLayout &candelabrum)
{
    if (!(room.lx > 0.0 && room.ly > 0.0 && room.lz > 0.0))
        throw ConfigError("room dimensions must be positive");
    if (m < 1)
        throw ConfigError("M must be positive");
    if (!(wavelength > 0.0))
        throw ConfigError("wavelength must be positive");

    if (kind == TopologyKind::Candelabrum)
        return build_candelabrum(room, m, wavelength, candelabrum);
    return build_strips(kind, room, m, wavelength);
}

void write_topology_csv(std::ostream &os, const Topology &topology)
{
    os << "index,x,y,z,bx,by,bz,ux,uy,uz\n";
    char buf[256];
    for (std::size_t i = 0; i < topology.poses.size(); ++i)
    {
        const auto &p = topology.poses[i];
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", i, p.position.x,
                      p.position.y, p.position.z, p.boresight.x, p.boresight.y, p.boresight.z, p.up.x, p.up.y, p.up.z);
        os << buf;
    }
}

} // namespace rwsim
