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

#include "rwsim/precoding.hpp"

#include "rwsim/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rwsim
{

namespace
{

using Factor = Eigen::LLT<CMatrix, Eigen::Lower>;

// Factorizes H = G^H G, which is the conjugate of G^T G^*.
Factor factor_gram(const CMatrix &g)
{
    if (g.cols() > g.rows())
        throw ConfigError("zero forcing needs M >= K, got M = " + std::to_string(g.rows()) +
                          ", K = " + std::to_string(g.cols()));
    const Eigen::Index k = g.cols();
    CMatrix gram = CMatrix::Zero(k, k);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(g.adjoint());

    Factor llt(gram);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError("Gram matrix is not positive definite", std::numeric_limits<double>::infinity());
    const double rcond = llt.rcond();
    if (!(rcond * max_gram_condition >= 1.0))
    {
        const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        throw SingularMatrixError("Gram matrix condition estimate " + std::to_string(cond) + " exceeds limit", cond);
    }
    return llt;
}

} // namespace

double zf_trace(const CMatrix &g)
{
    const Factor llt = factor_gram(g);
    // Tr(H^{-1}) = ||L^{-1}||_F^2
    CMatrix linv = CMatrix::Identity(g.cols(), g.cols());
    llt.matrixL().solveInPlace(linv);
    return linv.squaredNorm();
}

Precoder zf_precoder(const ChannelMatrix &g_hat)
{
    const Factor llt = factor_gram(g_hat.entries);
    const CMatrix h_inv = llt.solve(CMatrix::Identity(g_hat.k_count(), g_hat.k_count()));
    Precoder p;
    p.trace = h_inv.trace().real();
    p.columns = (g_hat.entries * h_inv).conjugate() / std::sqrt(p.trace);
    return p;
}

double zf_required_power(const ChannelMatrix &g, const LinkBudget &budget)
{
    if (!(budget.target_se >= 0.0))
        throw ConfigError("target spectral efficiency must be non-negative");
    if (!(budget.prelog > 0.0 && budget.prelog <= 1.0))
        throw ConfigError("prelog must lie in (0, 1]");
    const double sinr_target = std::exp2(budget.target_se / budget.prelog) - 1.0;
    return sinr_target * budget.sigma2 * zf_trace(g.entries);
}

Eigen::VectorXd SinrStatistics::sinr(double rho_dl, double sigma2) const
{
    const auto k = mean_gain.size();
    Eigen::VectorXd out(k);
    for (Eigen::Index i = 0; i < k; ++i)
    {
        const double signal = rho_dl * std::norm(mean_gain(i));
        const double disturbance = sigma2 + rho_dl * (interference(i) + gain_variance(i));
        out(i) = signal == 0.0 ? 0.0 : signal / disturbance;
    }
    return out;
}

SinrStatistics sinr_statistics(const ChannelMatrix &g_true, const PilotConfig &cfg, int n_realizations, Rng &rng)
{
    if (n_realizations < 2)
        throw ConfigError("SINR estimation needs at least 2 realizations");
    cfg.validate(g_true.k_count());

    const Eigen::Index k_count = g_true.k_count();
    const CMatrix g_t = g_true.entries.transpose();

    // Welford accumulators.
    CVector mean = CVector::Zero(k_count);
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(k_count);
    Eigen::VectorXd imean = Eigen::VectorXd::Zero(k_count);
    Eigen::VectorXd im2 = Eigen::VectorXd::Zero(k_count);

    SinrStatistics s;
    for (int r = 0; r < n_realizations; ++r)
    {
        const ChannelMatrix g_hat = estimate_channel(g_true, cfg, rng);
        Precoder p;
        try
        {
            p = zf_precoder(g_hat);
        }
        catch (const SingularMatrixError &)
        {
            ++s.discarded;
            continue;
        }
        ++s.used;
        const CMatrix eff = g_t * p.columns; // (k, i) = g_k^T a_i
        const double n = s.used;
        for (Eigen::Index k = 0; k < k_count; ++k)
        {
            const std::complex<double> x = eff(k, k);
            const std::complex<double> delta = x - mean(k);
            mean(k) += delta / n;
            m2(k) += std::real(std::conj(delta) * (x - mean(k)));

            double leak = 0.0;
            for (Eigen::Index i = 0; i < k_count; ++i)
                if (i != k)
                    leak += std::norm(eff(k, i));
            const double d = leak - imean(k);
            imean(k) += d / n;
            im2(k) += d * (leak - imean(k));
        }
    }

    if (s.discarded * 10 > n_realizations || s.used < 2)
        throw NumericalError("SINR estimate invalid: " + std::to_string(s.discarded) + " of " +
                             std::to_string(n_realizations) + " draws hit a singular precoder");

    const double n = s.used;
    s.mean_gain = mean;
    s.gain_variance = (m2 / (n - 1.0)).cwiseMax(0.0);
    s.interference = imean;
    s.mean_gain_stderr = (s.gain_variance / n).cwiseSqrt();
    s.interference_stderr = (im2 / (n - 1.0) / n).cwiseMax(0.0).cwiseSqrt();
    return s;
}

Eigen::VectorXd sinr_per_user(const ChannelMatrix &g_true, const PilotConfig &cfg, const LinkBudget &budget,
                              int n_realizations, Rng &rng)
{
    return sinr_statistics(g_true, cfg, n_realizations, rng).sinr(budget.rho_dl, budget.sigma2);
}

Eigen::VectorXd rate_per_user(const Eigen::VectorXd &sinr, const PilotConfig &cfg)
{
    if ((sinr.array() < 0.0).any())
        throw ConfigError("SINR must be non-negative");
    return cfg.prelog() * sinr.unaryExpr([](double x) { return std::log2(1.0 + x); }).array();
}

} // namespace rwsim
