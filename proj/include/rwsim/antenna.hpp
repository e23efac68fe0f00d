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
#include <functional>
#include <numbers>

namespace rwsim
{

// c = f * lambda with Table-style lambda = 15 cm at 2 GHz.
inline constexpr double speed_of_light = 3.0e8;

struct SubstrateSpec
{
    double eps_r = 10.2;
    double frequency = 2.0e9; // Hz
    double height = 1.588e-3; // m
};

// Which patch dimension enters the sinc(X) factor. The default follows the
// published channel model (substrate height); the textbook form uses the patch length.
enum class XDimension
{
    SubstrateHeight,
    PatchLength,
};

struct PatchDims
{
    double width = 0.0;
    double length = 0.0;
    double height = 0.0;
    double eps_reff = 0.0;
    double delta_l = 0.0;
    double wavelength = 0.0;
    double alpha = 0.0; // amplitude normalization, gain = alpha^2 * U
    XDimension x_dimension = XDimension::SubstrateHeight;

    double x_length() const { return x_dimension == XDimension::SubstrateHeight ? height : length; }
};

struct QuadratureOptions
{
    int nodes = 256;
    int check_nodes = 512;
    double rel_tol = 1e-6;
};

/// Transmission-line model design of a rectangular patch resonating at spec.frequency,
/// followed by numerical computation of alpha.
///
/// Throws ConfigError for non-physical substrate parameters and NumericalError when the
/// resulting length is not positive.
PatchDims design_patch(const SubstrateSpec &spec, XDimension x_dimension = XDimension::SubstrateHeight,
                       const QuadratureOptions &quad = {});

// sin(t)/t with the limit value 1 at t = 0. Below |t| = 1 a Taylor polynomial through
// t^18 is used; its truncation error is under 1e-19.
inline double sinc(double t)
{
    const double t2 = t * t;
    if (t2 < 1.0)
    {
        constexpr double c[] = {1.0 / 342.0, 1.0 / 272.0, 1.0 / 210.0, 1.0 / 156.0, 1.0 / 110.0,
                                1.0 / 72.0,  1.0 / 42.0,  1.0 / 20.0,  1.0 / 6.0};
        double acc = 1.0;
        for (const double ci : c)
            acc = 1.0 - acc * t2 * ci;
        return acc;
    }
    return std::sin(t) / t;
}

// Amplitude pattern sin(theta) sinc(X) sinc(Z); zero behind the patch (|phi| > pi/2).
double pattern_factor(double theta, double phi, const PatchDims &dims);

/// Same as pattern_factor, from the target direction in the element frame
/// (local x = boresight, z = up). `r` must equal the norm of `local`.
inline double pattern_factor_local(double lx, double ly, double lz, double r, const PatchDims &dims);

enum class Coverage
{
    FrontHemisphere, // theta in [0, pi], phi in [-pi/2, pi/2]
    FullSphere,
};

struct NormalizationResult
{
    double alpha2 = 0.0;     // 4 pi / integral
    double integral = 0.0;   // integral of U sin(theta) over the coverage
    double rel_change = 0.0; // |I(check_nodes) - I(nodes)| / I(check_nodes)
};

/// alpha^2 = 4 pi / int int U(theta, phi) sin(theta) dtheta dphi over the given coverage,
/// by tensor-product Gauss-Legendre with a refinement check.
///
/// Throws NumericalError when the refinement changes the integral by more than rel_tol.
NormalizationResult gain_normalization(const std::function<double(double, double)> &intensity, Coverage coverage,
                                       const QuadratureOptions &quad = {});

// alpha for the patch pattern, i.e. sqrt of gain_normalization with U = pattern_factor^2.
double normalization_alpha(const PatchDims &dims, const QuadratureOptions &quad = {});

// Directional power gain alpha^2 * pattern_factor^2.
double gain(double theta, double phi, const PatchDims &dims);

// ---- inline ----

inline double pattern_factor_local(double lx, double ly, double lz, double r, const PatchDims &dims)
{
    if (lx < 0.0 || r <= 0.0)
        return 0.0;
    const double inv_r = 1.0 / r;
    const double sin_theta = std::sqrt(lx * lx + ly * ly) * inv_r;
    const double x = std::numbers::pi * dims.x_length() / dims.wavelength * (lx * inv_r);
    const double z = std::numbers::pi * dims.width / dims.wavelength * (lz * inv_r);
    return sin_theta * sinc(x) * sinc(z);
}

} // namespace rwsim
