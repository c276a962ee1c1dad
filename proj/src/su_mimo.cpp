// SPDX-License-Identifier: Apache-2.0
//
// risopt: joint beamforming and RIS phase-shift optimization for MIMO downlinks
// Copyright (C) 2026 The risopt authors
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

#include "risopt/su_mimo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace risopt {

WaterfillAllocation waterfill(const RVector& gains, double total_power)
{
    if (!(total_power >= 0.0))
        throw DomainError("water-filling needs a non-negative power budget");
    WaterfillAllocation out;
    out.powers = RVector::Zero(gains.size());
    std::vector<Eigen::Index> order;
    for (Eigen::Index i = 0; i < gains.size(); ++i) {
        if (gains(i) < 0.0 || !std::isfinite(gains(i)))
            throw DomainError("water-filling gains must be finite and non-negative");
        if (gains(i) > 0.0)
            order.push_back(i);
    }
    if (order.empty())
        return out;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return gains(a) > gains(b); });

    // Largest active set m for which the weakest active stream gets p > 0.
    double inv_sum = 0.0;
    std::size_t active = 0;
    double mu = 0.0;
    for (std::size_t m = 0; m < order.size(); ++m) {
        inv_sum += 1.0 / gains(order[m]);
        const double level = (total_power + inv_sum) / static_cast<double>(m + 1);
        if (level - 1.0 / gains(order[m]) > 0.0) {
            active = m + 1;
            mu = level;
        } else {
            break;
        }
    }
    out.water_level = mu;
    for (std::size_t m = 0; m < active; ++m)
        out.powers(order[m]) = std::max(0.0, mu - 1.0 / gains(order[m]));
    return out;
}

CMatrix svd_waterfill_beamformer(const CMatrix& h, int streams, double tx_power, double noise_var)
{
    if (!(noise_var > 0.0))
        throw DomainError("noise variance must be positive");
    if (!(h.squaredNorm() > 0.0))
        throw DegenerateError("SVD beamformer needs a non-zero channel");
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU);
    const auto r = std::min<Eigen::Index>(streams, svd.singularValues().size());
    const RVector gains = svd.singularValues().head(r).array().square() / noise_var;
    const auto alloc = waterfill(gains, tx_power);
    CMatrix b = CMatrix::Zero(h.rows(), streams);
    for (Eigen::Index i = 0; i < r; ++i)
        b.col(i) = svd.matrixU().col(i) * std::sqrt(alloc.powers(i));
    return b;
}

CVector su_rate_gradient(const CTensor3& concat, const CMatrix& b, const CVector& psi, double noise_var)
{
    const auto rows = effective_rows(concat, b);
    QTable t;
    t.N = static_cast<int>(rows.size());
    const auto S = static_cast<std::size_t>(t.N);
    std::vector<CVector> u;
    for (const auto& h : rows)
        u.push_back(h.transpose() * psi);
    CMatrix q(t.N, t.N);
    std::vector<CVector> g(S * S);
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < S; ++j) {
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (u[i].transpose() * u[j].conjugate()).value() / noise_var;
            g[i * S + j] = rows[i] * u[j].conjugate() / noise_var;
        }
    }
    t.q.push_back(q);
    t.grad.push_back(std::move(g));
    grad_q_recursive(t);
    return user_rate_gradient(t);
}

namespace {

enum class SuBeamformer { svd, wmmse };

OptimizerResult run_su(const ChannelRealization& real, double tx_power, double noise_var, const OptimizerCfg& cfg,
                       SuBeamformer kind)
{
    cfg.validate();
    real.validate();
    if (real.num_ues() != 1)
        throw DimensionError("single-user optimizers need exactly one UE, got " + std::to_string(real.num_ues()));
    const auto concat = concatenated_tensors(real);
    const int N = real.N();
    CVector psi = ConcatPhase::from_phi(initial_phi(cfg, real.L())).psi();

    OptimizerResult res;
    res.bfs.tx_power = tx_power;
    auto channels = channels_at(concat, psi);
    auto update_bf = [&](bool first) {
        if (kind == SuBeamformer::svd)
            res.bfs.per_ue = {svd_waterfill_beamformer(channels[0], N, tx_power, noise_var)};
        else if (first)
            res.bfs = initial_beamformers(channels, N, tx_power);
        else
            res.bfs = wmmse_step(channels, res.bfs, noise_var);
    };
    update_bf(true);
    res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));

    for (int t = 0; t < cfg.max_outer; ++t) {
        if (t > 0 || kind == SuBeamformer::wmmse)
            update_bf(false);
        const CVector grad = su_rate_gradient(concat[0], res.bfs.per_ue[0], psi, noise_var);
        const MaxrStep step = ascent_step(concat, res.bfs, psi, grad, noise_var, cfg.line_search);
        if (step.improved)
            psi = step.psi;
        else
            ++res.rejected_steps;
        channels = channels_at(concat, psi);
        res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));
        res.outer_iterations = t + 1;
        if (trace_settled(res.rate_trace, cfg.tol_bpcu, cfg.patience)) {
            res.converged = true;
            break;
        }
    }
    res.phi = ConcatPhase(psi).phi();
    return res;
}

} // namespace

OptimizerResult gd_svd(const ChannelRealization& real, double tx_power, double noise_var, const OptimizerCfg& cfg)
{
    return run_su(real, tx_power, noise_var, cfg, SuBeamformer::svd);
}

OptimizerResult gd_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                         const OptimizerCfg& cfg)
{
    return run_su(real, tx_power, noise_var, cfg, SuBeamformer::wmmse);
}

} // namespace risopt
