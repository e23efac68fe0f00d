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

#include "rwsim/antenna.hpp"

#include "rwsim/errors.hpp"
#include "rwsim/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rwsim
{

PatchDims design_patch(const SubstrateSpec &spec, XDimension x_dimension, const QuadratureOptions &quad)
{
    if (!(spec.eps_r >= 1.0))
        throw ConfigError("substrate permittivity must be >= 1, got " + std::to_string(spec.eps_r));
    if (!(spec.frequency > 0.0))
        throw ConfigError("resonant frequency must be positive");
    if (!(spec.height > 0.0))
        throw ConfigError("substrate height must be positive");

    const double c = speed_of_light;
    const double f = spec.frequency;
    const double h = spec.height;

    PatchDims d;
    d.x_dimension = x_dimension;
    d.height = h;
    d.wavelength = c / f;
    d.width = c / (2.0 * f) * std::sqrt(2.0 / (spec.eps_r + 1.0));
    d.eps_reff = 0.5 * (spec.eps_r + 1.0) + 0.5 * (spec.eps_r - 1.0) / std::sqrt(1.0 + 12.0 * h / d.width);

    // Fringing-field length extension.
    const double wh = d.width / h;
    d.delta_l = h * 0.412 * (d.eps_reff + 0.3) * (wh + 0.264) / ((d.eps_reff - 0.258) * (wh + 0.8));
    d.length = c / (2.0 * f * std::sqrt(d.eps_reff)) - 2.0 * d.delta_l;
    if (!(d.length > 0.0))
        throw NumericalError("patch design yields non-positive length " + std::to_string(d.length) +
                             " m; substrate too thick for the resonant frequency");

    d.alpha = normalization_alpha(d, quad);
    return d;
}

double pattern_factor(double theta, double phi, const PatchDims &dims)
{
    if (std::abs(phi) > 0.5 * std::numbers::pi)
        return 0.0;
    const double st = std::sin(theta);
    const double x = std::numbers::pi * dims.x_length() / dims.wavelength * st * std::cos(phi);
    const double z = std::numbers::pi * dims.width / dims.wavelength * std::cos(theta);
    return st * sinc(x) * sinc(z);
}

NormalizationResult gain_normalization(const std::function<double(double, double)> &intensity, Coverage coverage,
                                       const QuadratureOptions &quad)
{
    if (quad.nodes < 1 || quad.check_nodes < 1)
        throw ConfigError("quadrature node counts must be positive");

    const double half = coverage == Coverage::FrontHemisphere ? 0.5 * std::numbers::pi : std::numbers::pi;
    auto integrand = [&](double theta, double phi) { return intensity(theta, phi) * std::sin(theta); };

    const double coarse = integrate_2d(integrand, 0.0, std::numbers::pi, -half, half, gauss_legendre(quad.nodes));
    const double fine = integrate_2d(integrand, 0.0, std::numbers::pi, -half, half, gauss_legendre(quad.check_nodes));

    NormalizationResult res;
    res.integral = fine;
    res.rel_change = std::abs(fine - coarse) / std::abs(fine);
    if (!(fine > 0.0))
        throw NumericalError("radiation intensity integrates to a non-positive value");
    if (!(res.rel_change <= quad.rel_tol))
        throw NumericalError("gain normalization did not converge: relative change " + std::to_string(res.rel_change) +
                             " between " + std::to_string(quad.nodes) + " and " + std::to_string(quad.check_nodes) +
                             " nodes");
    res.alpha2 = 4.0 * std::numbers::pi / fine;
    return res;
}

double normalization_alpha(const PatchDims &dims, const QuadratureOptions &quad)
{
    auto u = [&](double theta, double phi) {
        const double p = pattern_factor(theta, phi, dims);
        return p * p;
    };
    return std::sqrt(gain_normalization(u, Coverage::FrontHemisphere, quad).alpha2);
}

double gain(double theta, double phi, const PatchDims &dims)
{
    const double p = pattern_factor(theta, phi, dims);
    return dims.alpha * dims.alpha * p * p;
}

} // namespace rwsim
