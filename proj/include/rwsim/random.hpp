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
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rwsim
{

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent stream identified by (seed, path...), e.g.
/// derive_seed(seed, {drop, purpose}). Same inputs give the same stream on every run,
/// whatever the thread that consumes it.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
    return Rng(derive_seed(seed, path));
}

// CN(0, variance): independent real and imaginary parts with variance/2 each.
class ComplexGaussian
{
public:
    explicit ComplexGaussian(double variance = 1.0) : normal_(0.0, std::sqrt(0.5 * variance)) {}

    std::complex<double> operator()(Rng &rng)
    {
        const double re = normal_(rng);
        const double im = normal_(rng);
        return {re, im};
    }

private:
    std::normal_distribution<double> normal_;
};

} // namespace rwsim
