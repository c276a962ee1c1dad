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

#include "oracles.hpp"

#include "risopt/checks.hpp"
#include "risopt/maxr.hpp"
#include "risopt/sim.hpp"

#include <gtest/gtest.h>

using namespace risopt;

namespace {

ScenarioConfig desk(int L = 8)
{
    ScenarioConfig c;
    c.num_ues = 2;
    c.bs_geometry = {2, 2, 0.5};
    c.ue_geometry = {2, 1, 0.5};
    c.ris_geometry = geometry_for_count(L);
    c.paths_direct = 6;
    c.paths_bs_ris = 6;
    c.paths_ris_ue = 6;
    return c;
}

} // namespace

TEST(Maxr, GradientMatchesFiniteDifferences)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        oracle::Gen gen(seed + 100);
        const int M = gen.integer(1, 6), N = gen.integer(1, 4), K = gen.integer(1, 4), L = gen.integer(1, 10);
        const auto inst = random_instance(M, N, K, L, seed);
        const CVector g = sum_rate_gradient(inst.concat, inst.bfs, inst.psi, inst.noise_var);
        const auto f = [&](const CVector& psi) { return sum_rate_at(inst.concat, inst.bfs, psi, inst.noise_var); };
        const CVector want = oracle::fd_wirtinger(f, inst.psi);
        EXPECT_LT((g - want).norm(), 1e-5 * want.norm()) << "M=" << M << " N=" << N << " K=" << K << " L=" << L;
    }
}

TEST(Maxr, PerUserGradientWithInterference)
{
    const auto inst = random_instance(4, 3, 3, 5, 7);
    for (int k = 0; k < 3; ++k) {
        const QTable table = q_table(inst.concat[k], k, inst.bfs, inst.psi, inst.noise_var);
        const CVector g = user_rate_gradient(table);
        const auto f = [&](const CVector& psi) {
            return user_rate_semiquadratic(inst.concat[k], k, inst.bfs, psi, inst.noise_var);
        };
        const CVector want = oracle::fd_wirtinger(f, inst.psi);
        EXPECT_LT((g - want).norm(), 1e-5 * want.norm()) << "UE " << k;
    }
}

TEST(Maxr, FirstLevelQGradients)
{
    // For a complex function q(psi, conj(psi)) the directional derivative
    // D(d) = (dq/dpsi) d + (dq/dconj(psi)) conj(d), so
    // (dq/dpsi) d = (D(d) - j D(j d)) / 2.
    const auto inst = random_instance(3, 2, 2, 4, 9);
    CMatrix q;
    const auto grads = grad_q_first(inst.concat[1], 1, inst.bfs, inst.psi, inst.noise_var, &q);
    ASSERT_EQ(grads.size(), 4u);
    oracle::Gen gen(33);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto qij = [&](const CVector& psi) {
                CMatrix qq;
                grad_q_first(inst.concat[1], 1, inst.bfs, psi, inst.noise_var, &qq);
                return qq(i, j);
            };
            const auto D = [&](const CVector& d) {
                return (qij(inst.psi + h * d) - qij(inst.psi - h * d)) / (2.0 * h);
            };
            for (int rep = 0; rep < 3; ++rep) {
                const CVector d = gen.vector(inst.psi.size());
                const cplx want = 0.5 * (D(d) - cplx(0.0, 1.0) * D(cplx(0.0, 1.0) * d));
                const cplx got = (grads[static_cast<std::size_t>(i * 2 + j)].transpose() * d)(0);
                EXPECT_LT(std::abs(got - want), 1e-6 * (1.0 + std::abs(want))) << i << "," << j;
            }
        }
    EXPECT_NEAR(std::abs(q(0, 1) - std::conj(q(1, 0))), 0.0, 1e-12);
}

TEST(Maxr, RecursionNeedsFirstLevel)
{
    QTable table;
    table.N = 2;
    table.q.assign(2, CMatrix::Zero(2, 2));
    table.grad.assign(2, std::vector<CVector>(4));
    EXPECT_THROW(grad_q_recursive(table), InternalError);
}

TEST(Maxr, AscentStepNeverLowersTheRate)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = random_instance(4, 2, 3, 8, seed);
        const double before = sum_rate_at(inst.concat, inst.bfs, inst.psi, inst.noise_var);
        const MaxrStep step = maxr_step(inst.concat, inst.bfs, inst.psi, inst.noise_var, LineSearchCfg{});
        EXPECT_EQ(step.psi(0), cplx(1.0));
        for (Eigen::Index l = 0; l < step.psi.size(); ++l)
            EXPECT_NEAR(std::abs(step.psi(l)), 1.0, 1e-12);
        if (step.improved) {
            EXPECT_GT(step.rate, before);
            EXPECT_GT(step.beta, 0.0);
            EXPECT_NEAR(step.rate, sum_rate_at(inst.concat, inst.bfs, step.psi, inst.noise_var), 1e-10);
        } else {
            EXPECT_EQ(step.psi, inst.psi);
        }
    }
}

TEST(Maxr, ConjugateGradientIsAnAscentDirection)
{
    const auto inst = random_instance(4, 2, 2, 6, 4);
    const CVector g = sum_rate_gradient(inst.concat, inst.bfs, inst.psi, inst.noise_var);
    const double f0 = sum_rate_at(inst.concat, inst.bfs, inst.psi, inst.noise_var);
    const double eps = 1e-7;
    const double up = sum_rate_at(inst.concat, inst.bfs, inst.psi + eps * g.conjugate(), inst.noise_var);
    // First-order change is 2 eps |g|^2.
    EXPECT_NEAR((up - f0) / eps, 2.0 * g.squaredNorm(), 1e-4 * (1.0 + g.squaredNorm()));
}

TEST(Maxr, TraceIsMonotone)
{
    const ScenarioConfig cfg = desk(8);
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        const auto real = draw_realization(cfg, trial);
        OptimizerCfg oc;
        oc.max_outer = 60;
        const auto res = maxr_wmmse(real, cfg.tx_power_w(), cfg.noise_w(), oc);
        ASSERT_EQ(res.rate_trace.size(), static_cast<std::size_t>(res.outer_iterations) + 1);
        for (std::size_t t = 1; t < res.rate_trace.size(); ++t)
            EXPECT_GE(res.rate_trace[t] - res.rate_trace[t - 1], -1e-9);
        EXPECT_NEAR(res.bfs.total_power(), cfg.tx_power_w(), 1e-9 * cfg.tx_power_w());
        for (Eigen::Index l = 0; l < res.phi.size(); ++l)
            EXPECT_NEAR(std::abs(res.phi(l)), 1.0, 1e-12);
    }
}

TEST(Maxr, WithoutRisEqualsWmmse)
{
    const ScenarioConfig cfg = desk(8);
    const auto real = draw_realization(cfg, 2).without_ris();
    OptimizerCfg oc;
    oc.max_outer = 50;
    const auto a = maxr_wmmse(real, cfg.tx_power_w(), cfg.noise_w(), oc);
    const auto b = wmmse_fixed_phase(real, cfg.tx_power_w(), cfg.noise_w(), oc);
    const auto n = std::min(a.rate_trace.size(), b.rate_trace.size());
    for (std::size_t t = 0; t < n; ++t)
        EXPECT_NEAR(a.rate_trace[t], b.rate_trace[t], 1e-9 * (1.0 + b.rate_trace[t]));
}

TEST(Maxr, StopRule)
{
    EXPECT_FALSE(trace_settled({1.0}, 1e-6, 1));
    EXPECT_TRUE(trace_settled({1.0, 1.0}, 1e-6, 1));
    EXPECT_FALSE(trace_settled({1.0, 1.0, 2.0, 2.0}, 1e-6, 2));
    EXPECT_TRUE(trace_settled({1.0, 2.0, 2.0, 2.0}, 1e-6, 2));
}

TEST(Maxr, ConfigValidation)
{
    LineSearchCfg ls;
    ls.beta_max = -1.0;
    EXPECT_THROW(ls.validate(), ConfigError);
    ls = LineSearchCfg{};
    ls.iterations = 0;
    EXPECT_THROW(ls.validate(), ConfigError);
    OptimizerCfg oc;
    oc.patience = 0;
    EXPECT_THROW(oc.validate(), ConfigError);
    oc = OptimizerCfg{};
    oc.tol_bpcu = -1.0;
    EXPECT_THROW(oc.validate(), ConfigError);
}
