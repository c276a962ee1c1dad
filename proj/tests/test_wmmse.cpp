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

#include "risopt/mine.hpp"
#include "risopt/wmmse.hpp"

#include <gtest/gtest.h>

using namespace risopt;

namespace {

struct Instance {
    std::vector<CMatrix> h;
    BeamformerSet bfs;
    double s2 = 1.0;
};

Instance make(oracle::Gen& gen, int M, int N, int K, double tx = 1.0)
{
    Instance in;
    for (int k = 0; k < K; ++k) {
        in.h.push_back(gen.matrix(M, N));
        in.bfs.per_ue.push_back(gen.matrix(M, N));
    }
    in.bfs.tx_power = tx;
    in.bfs.normalize();
    in.s2 = gen.uniform(0.05, 1.0);
    return in;
}

} // namespace

TEST(Wmmse, NormalizeMeetsBudgetWithEquality)
{
    oracle::Gen gen(21);
    auto in = make(gen, 4, 2, 3, 2.5);
    EXPECT_NEAR(in.bfs.total_power(), 2.5, 1e-12);
    BeamformerSet zero;
    zero.per_ue = {CMatrix::Zero(2, 2)};
    EXPECT_THROW(zero.normalize(), DegenerateError);
}

TEST(Wmmse, UserRateMatchesIndependentForms)
{
    oracle::Gen gen(22);
    for (int rep = 0; rep < 30; ++rep) {
        const int M = gen.integer(1, 6), N = gen.integer(1, 4), K = gen.integer(1, 4);
        auto in = make(gen, M, N, K);
        for (int k = 0; k < K; ++k) {
            const double r = user_rate(in.h, k, in.bfs, in.s2);
            EXPECT_NEAR(r, oracle::rate_logdet_ratio(in.h, in.bfs.per_ue, k, in.s2), 1e-9 * (1.0 + r));
            EXPECT_NEAR(r, oracle::rate_from_mse(in.h, in.bfs.per_ue, k, in.s2), 1e-9 * (1.0 + r));
        }
    }
}

TEST(Wmmse, WeightIsHermitianWithEigenvaluesAboveOne)
{
    oracle::Gen gen(23);
    auto in = make(gen, 5, 3, 3);
    const auto st = wmmse_state(in.h, in.bfs, in.s2);
    for (int k = 0; k < 3; ++k) {
        const CMatrix& w = st.weights[static_cast<std::size_t>(k)];
        EXPECT_LT(hermitian_defect(w), 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(w);
        EXPECT_GE(es.eigenvalues().minCoeff(), 1.0 - 1e-9);
        // log det W equals the rate of the UE.
        EXPECT_NEAR(oracle::logdet(w), user_rate(in.h, k, in.bfs, in.s2), 1e-9);
    }
    EXPECT_THROW(weight_matrix(in.h[0], in.bfs.per_ue[0], -CMatrix::Identity(3, 3)), DomainError);
}

TEST(Wmmse, MmseFilterMinimisesTheMse)
{
    oracle::Gen gen(24);
    auto in = make(gen, 4, 3, 2);
    for (int k = 0; k < 2; ++k) {
        const CMatrix a = mmse_filter(in.h[k], k, in.bfs, in.s2);
        const double best = oracle::mse(in.h[k], in.bfs.per_ue, k, a, in.s2).trace().real();
        EXPECT_NEAR(mse_matrix(in.h[k], k, in.bfs, a, in.s2).trace().real(), best, 1e-10);
        for (int probe = 0; probe < 20; ++probe) {
            const CMatrix d = 1e-3 * gen.matrix(3, 3);
            EXPECT_GE(oracle::mse(in.h[k], in.bfs.per_ue, k, a + d, in.s2).trace().real(), best - 1e-12);
        }
        // No combining leaves the full symbol error.
        const CMatrix e0 = mse_matrix(in.h[k], k, in.bfs, CMatrix::Zero(3, 3), in.s2);
        EXPECT_LT((e0 - CMatrix::Identity(3, 3)).norm(), 1e-15);
    }
}

TEST(Wmmse, StepKeepsBudgetAndNeverLowersTheRate)
{
    oracle::Gen gen(25);
    for (int rep = 0; rep < 20; ++rep) {
        const int M = gen.integer(2, 8), N = gen.integer(1, 4), K = gen.integer(1, 4);
        auto in = make(gen, M, N, K, 3.0);
        double prev = sum_rate(in.h, in.bfs, in.s2);
        for (int it = 0; it < 40; ++it) {
            in.bfs = wmmse_step(in.h, in.bfs, in.s2);
            EXPECT_NEAR(in.bfs.total_power(), 3.0, 1e-9);
            const double now = sum_rate(in.h, in.bfs, in.s2);
            EXPECT_GE(now, prev - 1e-9) << "rep " << rep << " iteration " << it;
            prev = now;
        }
    }
}

TEST(Wmmse, InitialBeamformersUseLeadingSingularVectors)
{
    oracle::Gen gen(26);
    const std::vector<CMatrix> h{gen.matrix(4, 2), gen.matrix(4, 2)};
    const auto bfs = initial_beamformers(h, 2, 2.0);
    EXPECT_NEAR(bfs.total_power(), 2.0, 1e-12);
    for (int k = 0; k < 2; ++k) {
        // Columns lie in the column space of H_k.
        const CMatrix& b = bfs.per_ue[k];
        const CMatrix proj = h[k] * oracle::inverse(h[k].adjoint() * h[k]) * h[k].adjoint();
        EXPECT_LT((proj * b - b).norm(), 1e-10);
    }
    // More streams than antennas leaves zero columns.
    const std::vector<CMatrix> wide{gen.matrix(2, 3)};
    const auto w = initial_beamformers(wide, 3, 1.0);
    EXPECT_LT(w.per_ue[0].col(2).norm(), 1e-15);
}

TEST(Wmmse, IterateTraceIsNonDecreasing)
{
    oracle::Gen gen(27);
    auto in = make(gen, 6, 2, 3);
    const auto run = wmmse_iterate(in.h, in.bfs, in.s2, 200, 1e-10);
    ASSERT_GE(run.rate_trace.size(), 2u);
    for (std::size_t t = 1; t < run.rate_trace.size(); ++t)
        EXPECT_GE(run.rate_trace[t], run.rate_trace[t - 1] - 1e-9);
}

TEST(Wmmse, RejectsBadInputs)
{
    oracle::Gen gen(28);
    auto in = make(gen, 3, 2, 2);
    EXPECT_THROW(sum_rate(in.h, in.bfs, 0.0), DomainError);
    std::vector<CMatrix> short_h{in.h[0]};
    EXPECT_THROW(sum_rate(short_h, in.bfs, 1.0), DimensionError);
}
