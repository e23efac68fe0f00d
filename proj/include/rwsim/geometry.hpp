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

#include <cmath>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rwsim
{

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// r >= 0, theta in [0, pi] measured from +z, phi in [-pi, pi) measured from +x towards +y.
struct Spherical
{
    double r = 0.0, theta = 0.0, phi = 0.0;
};

// (0, 0, 0) at the origin; phi = 0 on the z-axis.
Spherical cart_to_sph(Vec3 p);
Vec3 sph_to_cart(const Spherical &s);

/// Position and orientation of a single patch element.
///
/// The local frame is x = boresight (patch normal), z = up (theta = 0 axis),
/// y = up x boresight, which makes it right-handed.
struct AntennaPose
{
    Vec3 position;
    Vec3 boresight{1.0, 0.0, 0.0};
    Vec3 up{0.0, 0.0, 1.0};

    Vec3 lateral() const { return cross(up, boresight); }

    // Coordinates of `target - position` in the local frame.
    Vec3 to_local(Vec3 target) const;
};

// Throws GeometryError when target coincides with the pose position.
Spherical to_local_spherical(const AntennaPose &pose, Vec3 target);

// Axis-aligned room with one floor corner at the origin.
struct Room
{
    double lx = 40.0, ly = 40.0, lz = 10.0;

    Vec3 center() const { return {0.5 * lx, 0.5 * ly, 0.5 * lz}; }
    bool contains(Vec3 p, double tol = 1e-9) const;
};

enum class TopologyKind
{
    Candelabrum,
    SingleStrip1Wall,
    SingleStrip4Walls,
    DoubleStrip1Wall,
    DoubleStrip4Walls,
    QuadStrip1Wall,
    QuadStrip4Walls,
};

inline constexpr TopologyKind all_topologies[] = {
    TopologyKind::Candelabrum,      TopologyKind::SingleStrip1Wall,  TopologyKind::SingleStrip4Walls,
    TopologyKind::DoubleStrip1Wall, TopologyKind::DoubleStrip4Walls, TopologyKind::QuadStrip1Wall,
    TopologyKind::QuadStrip4Walls,
};

// CLI spelling, e.g. "quad-strip-4walls".
std::string_view topology_name(TopologyKind kind);
TopologyKind parse_topology(std::string_view name);

/// Ceiling-hung co-located array: `panels` square panels of `grid` x `grid` elements
/// arranged on a regular polygon around the ceiling center, each tilted downwards.
struct CandelabrumLayout
{
    int panels = 8;
    int grid = 8;
    double spacing_wavelengths = 0.5;
    double radius = 0.5;     // panel centers, horizontal distance from the room's vertical axis [m]
    double tilt_deg = 45.0;  // boresight depression below horizontal
    double drop = 0.25;      // panel centers hang this far below the ceiling [m]
};

struct StripLayout
{
    int walls = 1;
    int strips = 1;
    double spacing_wavelengths = 0.5;
    double strip_pitch = 2.0; // vertical distance between stacked strips [m]
};

// Wall count, strip count and element spacing for the strip kinds.
StripLayout strip_layout(TopologyKind kind);

struct Topology
{
    TopologyKind kind = TopologyKind::Candelabrum;
    std::vector<AntennaPose> poses;
};

/// Builds the M element poses of a deployment.
///
/// Strips are horizontal rows centered on the wall width, boresight along the inward wall
/// normal and up = +z. Stacked strips are 2 m apart and centered about mid-height. For
/// 4-wall layouts elements are split evenly, ordered wall-major (y = 0, x = lx, y = ly,
/// x = 0), then strip (bottom to top), then along boresight x up.
///
/// Throws ConfigError when M does not split evenly or a strip is longer than its wall.
Topology build_topology(TopologyKind kind, const Room &room, int m, double wavelength,
                        const CandelabrumLayout &candelabrum = {});

// Columns index,x,y,z,bx,by,bz,ux,uy,uz with 6 decimals.
void write_topology_csv(std::ostream &os, const Topology &topology);

} // namespace rwsim
