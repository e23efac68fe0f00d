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

#include "rwsim/antenna.hpp"
#include "rwsim/geometry.hpp"
#include "rwsim/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <span>

namespace rwsim
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// M x K line-of-sight gains, row m = transmit element, column k = user.
struct ChannelMatrix
{
    CMatrix entries;

    Eigen::Index m_count() const { return entries.rows(); }
    Eigen::Index k_count() const { return entries.cols(); }
};

struct PilotConfig
{
    int tau_p = 200;       // pilot length, >= K
    int tau_c = 2000;      // coherence block, > tau_p
    double rho_ul = 1e-3;  // per-user pilot power scale [W]
    double sigma2 = 0.0;   // receiver noise power [W]

    // Throws ConfigError on violated constraints for `k_count` users.
    void validate(Eigen::Index k_count) const;

    // Per-entry variance of the LS estimation error.
    double error_variance() const { return sigma2 / (rho_ul * tau_p); }

    // Fraction of the block left for downlink data.
    double prelog() const { return 1.0 - static_cast<double>(tau_p) / tau_c; }
};

/// Free-space gain from a patch element to a single-antenna user:
/// (alpha lambda / 4 pi r) exp(-j 2 pi r / lambda) times the element pattern at the
/// user direction in the element frame. Zero behind the element.
///
/// Throws GeometryError when the user sits on the element.
std::complex<double> los_gain(const AntennaPose &pose, Vec3 user, const PatchDims &dims);

ChannelMatrix channel_matrix(const Topology &topology, std::span<const Vec3> users, const PatchDims &dims);

/// LS estimate from orthogonal pilots in its de-spread form:
/// G_hat = G + W' / sqrt(rho_ul tau_p) with W' i.i.d. CN(0, sigma2).
/// With sigma2 = 0 the true channel is returned and no random numbers are drawn.
ChannelMatrix estimate_channel(const ChannelMatrix &g_true, const PilotConfig &cfg, Rng &rng);

// Same estimate for a given de-spread noise matrix W' (M x K).
ChannelMatrix estimate_from_despread_noise(const ChannelMatrix &g_true, const PilotConfig &cfg,
                                           const CMatrix &despread_noise);

// tau_p x K pilot book made of the first K columns of the unitary tau_p-point DFT.
CMatrix dft_pilot_book(int tau_p, int k_count);

/// Reference estimator that forms the received pilot block
/// Y = sqrt(rho_ul tau_p) G Phi^H + W (M x tau_p), de-spreads with Phi and scales.
ChannelMatrix estimate_with_pilots(const ChannelMatrix &g_true, const PilotConfig &cfg, const CMatrix &pilots,
                                   const CMatrix &noise);

// "M,K" header line, the two counts, then "m,k,re,im" rows at 17 significant digits.
void write_channel_csv(std::ostream &os, const ChannelMatrix &g);
ChannelMatrix read_channel_csv(std::istream &is);

} // namespace rwsim
