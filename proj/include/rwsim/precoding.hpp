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

#include "rwsim/channel.hpp"

#include <Eigen/Dense>

namespace rwsim
{

// Gram matrices with a larger 1-norm condition estimate are treated as singular.
inline constexpr double max_gram_condition = 1e12;

/// Normalized zero-forcing precoder A = G_hat^* (G_hat^T G_hat^*)^{-1} / sqrt(trace),
/// trace = Tr((G_hat^T G_hat^*)^{-1}), so that the columns carry unit total power.
struct Precoder
{
    CMatrix columns; // M x K, column k = a_k
    double trace = 0.0;
};

struct LinkBudget
{
    double rho_dl = 1.0;    // total downlink power [W]
    double sigma2 = 0.0;    // noise power [W]
    double target_se = 4.0; // bit/s/Hz per user
    // Factor applied to the log term when sizing power; 1 leaves the pilot overhead out.
    double prelog = 1.0;
};

// Tr((G^T G^*)^{-1}) through a Cholesky factor of G^H G. Throws SingularMatrixError.
double zf_trace(const CMatrix &g);

Precoder zf_precoder(const ChannelMatrix &g_hat);

/// Downlink power at which every user's zero-forcing SINR with perfect CSI equals
/// 2^(target_se / prelog) - 1, i.e. (2^(target_se / prelog) - 1) sigma2 Tr((G^T G^*)^{-1}).
double zf_required_power(const ChannelMatrix &g, const LinkBudget &budget);

/// Monte Carlo moments of the effective gains g_k^T a_i over pilot-noise draws.
///
/// These do not depend on rho_dl, so one set of statistics serves a whole row of
/// downlink powers.
struct SinrStatistics
{
    CVector mean_gain;            // E{g_k^T a_k}
    Eigen::VectorXd gain_variance; // var{g_k^T a_k}
    Eigen::VectorXd interference;  // sum_{i != k} E{|g_k^T a_i|^2}
    Eigen::VectorXd mean_gain_stderr;
    Eigen::VectorXd interference_stderr;
    int used = 0;
    int discarded = 0;

    // SINR_k = rho |E{g_k^T a_k}|^2 / (sigma2 + rho interference_k + rho variance_k).
    Eigen::VectorXd sinr(double rho_dl, double sigma2) const;
};

/// Draws n_realizations channel estimates from `rng`, builds the ZF precoder for each
/// and accumulates the gain moments in draw order. Draws with a singular Gram matrix are
/// dropped; more than 10% dropped throws NumericalError.
SinrStatistics sinr_statistics(const ChannelMatrix &g_true, const PilotConfig &cfg, int n_realizations, Rng &rng);

Eigen::VectorXd sinr_per_user(const ChannelMatrix &g_true, const PilotConfig &cfg, const LinkBudget &budget,
                              int n_realizations, Rng &rng);

// (1 - tau_p / tau_c) log2(1 + SINR_k) in bit/s/Hz.
Eigen::VectorXd rate_per_user(const Eigen::VectorXd &sinr, const PilotConfig &cfg);

} // namespace rwsim
