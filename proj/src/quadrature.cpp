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

#include "rwsim/quadrature.hpp"

#include "rwsim/errors.hpp"

#include <cmath>
#include <numbers>

namespace rwsim
{

GaussLegendreRule gauss_legendre(int n)
{
    if (n < 1)
        throw ConfigError("Gauss-Legendre order must be positive");

    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter)
        {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j)
            {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

double integrate_2d(const std::function<double(double, double)> &f, double a0, double b0, double a1, double b1,
                    const GaussLegendreRule &rule)
{
    const double h0 = 0.5 * (b0 - a0), c0 = 0.5 * (b0 + a0);
    const double h1 = 0.5 * (b1 - a1), c1 = 0.5 * (b1 + a1);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    {
        const double u = c0 + h0 * rule.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            row += rule.weights[j] * f(u, c1 + h1 * rule.nodes[j]);
        total += rule.weights[i] * row;
    }
    return total * h0 * h1;
}

} // namespace rwsim
