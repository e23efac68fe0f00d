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

#include <catch_amalgamated.hpp>

#include "rwsim/errors.hpp"
#include "rwsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace rwsim;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

constexpr double pi = std::numbers::pi;

// Random right-handed orthonormal frame from two Gaussian vectors.
AntennaPose random_pose(std::mt19937_64 &rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 b{n(rng), n(rng), n(rng)};
    b = (1.0 / norm(b)) * b;
    Vec3 t{n(rng), n(rng), n(rng)};
    Vec3 u = t - dot(t, b) * b;
    u = (1.0 / norm(u)) * u;
    return {{n(rng), n(rng), n(rng)}, b, u};
}

} // namespace

TEST_CASE("cart_to_sph on axis-aligned and hand-evaluated points", "[geometry]")
{
    auto s = cart_to_sph({1.0, 0.0, 0.0});
    CHECK(s.r == 1.0);
    CHECK_THAT(s.theta, WithinAbs(pi / 2, 1e-15));
    CHECK(s.phi == 0.0);

    s = cart_to_sph({0.0, 0.0, 1.0});
    CHECK(s.r == 1.0);
    CHECK(s.theta == 0.0);
    CHECK(s.phi == 0.0);

    s = cart_to_sph({1.0, 1.0, std::sqrt(2.0)});
    CHECK_THAT(s.r, WithinRel(2.0, 1e-15));
    CHECK_THAT(s.theta, WithinAbs(pi / 4, 1e-15));
    CHECK_THAT(s.phi, WithinAbs(pi / 4, 1e-15));
}

TEST_CASE("cart_to_sph degenerate and boundary conventions", "[geometry]")
{
    const auto origin = cart_to_sph({0.0, 0.0, 0.0});
    CHECK(origin.r == 0.0);
    CHECK(origin.theta == 0.0);
    CHECK(origin.phi == 0.0);

    const auto down = cart_to_sph({0.0, 0.0, -3.0});
    CHECK(down.theta == pi);
    CHECK(down.phi == 0.0);

    // The negative x-axis maps to -pi, keeping phi in [-pi, pi).
    CHECK(cart_to_sph({-1.0, 0.0, 0.0}).phi == -pi);
    CHECK(cart_to_sph({-1.0, -0.0, 0.0}).phi == -pi);
    CHECK_THAT(cart_to_sph({-1.0, -1.0, 0.0}).phi, WithinAbs(-3 * pi / 4, 1e-15));
}

TEST_CASE("cart_to_sph round trip", "[geometry][property]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 10000; ++i)
    {
        const Vec3 p{u(rng), u(rng), u(rng)};
        const auto s = cart_to_sph(p);
        REQUIRE(s.theta >= 0.0);
        REQUIRE(s.theta <= pi);
        REQUIRE(s.phi >= -pi);
        REQUIRE(s.phi < pi);
        const Vec3 q = sph_to_cart(s);
        REQUIRE(norm(q - p) <= 1e-12 * norm(p));
    }
}

TEST_CASE("to_local_spherical examples", "[geometry]")
{
    const AntennaPose pose{{0, 0, 0}, {1, 0, 0}, {0, 0, 1}};
    auto s = to_local_spherical(pose, {1, 0, 0});
    CHECK(s.r == 1.0);
    CHECK_THAT(s.theta, WithinAbs(pi / 2, 1e-15));
    CHECK(s.phi == 0.0);

    s = to_local_spherical(pose, {0, 0, 5});
    CHECK(s.r == 5.0);
    CHECK(s.theta == 0.0);
    CHECK(s.phi == 0.0);

    // Boresight along +y: the world +y direction is local +x.
    const AntennaPose turned{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    s = to_local_spherical(turned, {0, 2, 0});
    CHECK(s.r == 2.0);
    CHECK_THAT(s.theta, WithinAbs(pi / 2, 1e-15));
    CHECK(s.phi == 0.0);

    // World -x is to the right of a +y-facing patch with +z up: local +y = z x y = -x.
    s = to_local_spherical(turned, {-1, 0, 0});
    CHECK_THAT(s.phi, WithinAbs(pi / 2, 1e-15));

    CHECK_THROWS_AS(to_local_spherical(pose, {0, 0, 0}), GeometryError);
}

TEST_CASE("to_local_spherical preserves distance", "[geometry][property]")
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 10.0);
    for (int i = 0; i < 5000; ++i)
    {
        const AntennaPose pose = random_pose(rng);
        const Vec3 target{n(rng), n(rng), n(rng)};
        const double expected = norm(target - pose.position);
        REQUIRE_THAT(to_local_spherical(pose, target).r, WithinRel(expected, 1e-12));
    }
}

TEST_CASE("single strip on one wall", "[geometry][topology]")
{
    const Room room;
    const auto topo = build_topology(TopologyKind::SingleStrip1Wall, room, 512, 0.15);
    REQUIRE(topo.poses.size() == 512);
    for (std::size_t i = 1; i < topo.poses.size(); ++i)
    {
        REQUIRE_THAT(norm(topo.poses[i].position - topo.poses[i - 1].position), WithinRel(0.075, 1e-12));
        REQUIRE(topo.poses[i].boresight == topo.poses[0].boresight);
    }
    const double span = norm(topo.poses.back().position - topo.poses.front().position);
    CHECK_THAT(span, WithinRel(38.325, 1e-12));
    // Centered on the wall at mid-height.
    const Vec3 mid = 0.5 * (topo.poses.front().position + topo.poses.back().position);
    CHECK_THAT(mid.x, WithinAbs(20.0, 1e-12));
    CHECK(mid.y == 0.0);
    CHECK(mid.z == 5.0);
}

TEST_CASE("quadruple strip on four walls", "[geometry][topology]")
{
    const Room room;
    const auto topo = build_topology(TopologyKind::QuadStrip4Walls, room, 512, 0.15);
    REQUIRE(topo.poses.size() == 512);

    std::set<double> heights;
    std::set<std::tuple<double, double, double>> normals;
    for (const auto &p : topo.poses)
    {
        heights.insert(p.position.z);
        normals.insert({p.boresight.x, p.boresight.y, p.boresight.z});
    }
    CHECK(heights == std::set<double>{2.0, 4.0, 6.0, 8.0});
    CHECK(normals.size() == 4);

    // Wall-major, then strip, then along the wall: 32 consecutive elements per strip.
    for (int block = 0; block < 16; ++block)
        for (int i = 1; i < 32; ++i)
        {
            const auto &a = topo.poses[static_cast<std::size_t>(block * 32 + i - 1)];
            const auto &b = topo.poses[static_cast<std::size_t>(block * 32 + i)];
            REQUIRE_THAT(norm(b.position - a.position), WithinRel(1.2, 1e-12));
            REQUIRE(a.position.z == b.position.z);
        }
    CHECK(topo.poses[0].position.z == 2.0);
    CHECK(topo.poses[32].position.z == 4.0);
    CHECK(topo.poses[128].boresight == Vec3{-1.0, 0.0, 0.0});
}

TEST_CASE("strip spacing is the stated multiple of the wavelength", "[geometry][topology][property]")
{
    const Room room;
    const double lambda = 0.15;
    for (const auto kind : all_topologies)
    {
        if (kind == TopologyKind::Candelabrum)
            continue;
        const auto layout = strip_layout(kind);
        const auto topo = build_topology(kind, room, 512, lambda);
        REQUIRE(topo.poses.size() == 512);
        const int per_strip = 512 / (layout.walls * layout.strips);
        for (std::size_t i = 0; i < topo.poses.size(); ++i)
            if (i % static_cast<std::size_t>(per_strip) != 0)
                REQUIRE_THAT(norm(topo.poses[i].position - topo.poses[i - 1].position),
                             WithinRel(layout.spacing_wavelengths * lambda, 1e-12));
    }
    CHECK(strip_layout(TopologyKind::SingleStrip1Wall).spacing_wavelengths == 0.5);
    CHECK(strip_layout(TopologyKind::SingleStrip4Walls).spacing_wavelengths == 2.0);
    CHECK(strip_layout(TopologyKind::DoubleStrip1Wall).spacing_wavelengths == 1.0);
    CHECK(strip_layout(TopologyKind::DoubleStrip4Walls).spacing_wavelengths == 4.0);
    CHECK(strip_layout(TopologyKind::QuadStrip1Wall).spacing_wavelengths == 2.0);
    CHECK(strip_layout(TopologyKind::QuadStrip4Walls).spacing_wavelengths == 8.0);
}

TEST_CASE("every pose sits on the room boundary or under the ceiling and faces inwards", "[geometry][topology]")
{
    const Room room;
    for (const auto kind : all_topologies)
    {
        const auto topo = build_topology(kind, room, 512, 0.15);
        REQUIRE(topo.poses.size() == 512);
        for (const auto &p : topo.poses)
        {
            REQUIRE(room.contains(p.position));
            REQUIRE(dot(p.boresight, room.center() - p.position) > 0.0);
            REQUIRE_THAT(norm(p.boresight), WithinAbs(1.0, 1e-12));
            REQUIRE_THAT(norm(p.up), WithinAbs(1.0, 1e-12));
            REQUIRE_THAT(dot(p.boresight, p.up), WithinAbs(0.0, 1e-12));
            if (kind != TopologyKind::Candelabrum)
            {
                const bool on_wall = p.position.x == 0.0 || p.position.y == 0.0 || p.position.x == room.lx ||
                                     p.position.y == room.ly;
                REQUIRE(on_wall);
            }
        }
    }
}

TEST_CASE("candelabrum layout", "[geometry][topology]")
{
    const Room room;
    const auto topo = build_topology(TopologyKind::Candelabrum, room, 512, 0.15);
    std::set<std::pair<long, long>> azimuths;
    for (const auto &p : topo.poses)
    {
        // 45 degree depression.
        REQUIRE_THAT(p.boresight.z, WithinAbs(-std::sqrt(0.5), 1e-12));
        azimuths.insert({std::lround(p.boresight.x * 1e6), std::lround(p.boresight.y * 1e6)});
        REQUIRE(p.position.z < room.lz);
        REQUIRE(p.position.z > room.lz - 1.0);
    }
    CHECK(azimuths.size() == 8);

    // Adjacent elements within a panel are half a wavelength apart.
    CHECK_THAT(norm(topo.poses[1].position - topo.poses[0].position), WithinRel(0.075, 1e-12));
    CHECK_THAT(norm(topo.poses[8].position - topo.poses[0].position), WithinRel(0.075, 1e-12));

    CandelabrumLayout small;
    small.panels = 4;
    small.grid = 4;
    CHECK(build_topology(TopologyKind::Candelabrum, room, 64, 0.15, small).poses.size() == 64);
    CHECK_THROWS_AS(build_topology(TopologyKind::Candelabrum, room, 512, 0.15, small), ConfigError);
}

TEST_CASE("topology configuration errors", "[geometry][topology]")
{
    const Room room;
    CHECK_THROWS_WITH(build_topology(TopologyKind::SingleStrip1Wall, room, 600, 0.15),
                      ContainsSubstring("wall y=0") && ContainsSubstring("44.925"));
    CHECK_THROWS_AS(build_topology(TopologyKind::QuadStrip4Walls, room, 500, 0.15), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologyKind::SingleStrip4Walls, Room{40, 10, 10}, 512, 0.15), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologyKind::QuadStrip1Wall, Room{40, 40, 5}, 512, 0.15), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologyKind::SingleStrip1Wall, room, 0, 0.15), ConfigError);
}

TEST_CASE("topology names round trip", "[geometry]")
{
    for (const auto kind : all_topologies)
        CHECK(parse_topology(topology_name(kind)) == kind);
    CHECK_THROWS_AS(parse_topology("ceiling-strip"), ConfigError);
}

TEST_CASE("topology CSV dump", "[geometry][io]")
{
    const auto topo = build_topology(TopologyKind::SingleStrip1Wall, Room{}, 512, 0.15);
    std::ostringstream os;
    write_topology_csv(os, topo);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "index,x,y,z,bx,by,bz,ux,uy,uz");
    std::getline(is, line);
    CHECK(line == "0,0.837500,0.000000,5.000000,0.000000,1.000000,0.000000,0.000000,0.000000,1.000000");
    int rows = 1;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 512);
}
