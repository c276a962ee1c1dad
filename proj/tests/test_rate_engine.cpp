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
#include "risopt/rate_engine.hpp"

#include <gtest/gtest.h>

using namespace risopt;

TEST(RateEngine, ConcatPhaseGauge)
{
    CVector phi(3);
    phi << std::polar(1.0, 0.2), std::polar(1.0, -1.0), std::polar(1.0, 2.0);
    const auto c = ConcatPhase::from_phi(phi);
    ASSERT_EQ(c.size(), 4);
    EXPECT_EQ(c.psi()(0), cplx(1.0));
    EXPECT_LT((c.phi() - phi).norm(), 1e-15);
    const ConcatPhase scaled(std::polar(2.0, 0.5) * c.psi());
    EXPECT_LT((scaled.gauge_fixed().psi() - c.psi()).norm(), 1e-14);
    EXPECT_LT((scaled.phi() - phi).norm(), 1e-14);
    EXPECT_THROW(ConcatPhase(CVector::Zero(2)).phi(), DegenerateError);
}

TEST(RateEngine, ProjectionToUnitModulus)
{
    CVector x(3);
    x << cplx(3.0, 4.0), 0.0, cplx(-2.0, 0.0);
    const CVector p = project_unit_modulus(x);
    EXPECT_NEAR(std::abs(p(0) - cplx(0.6, 0.8)), 0.0, 1e-15);
    EXPECT_EQ(p(1), cplx(1.0));
    EXPECT_NEAR(std::abs(p(2) + 1.0), 0.0, 1e-15);
}

TEST(RateEngine, EffectiveRowsGiveRowsOfBHH)
{
    oracle::Gen gen(31);
    const CTensor3 t = gen.tensor(5, 4, 3);
    const CMatrix b = gen.matrix(5, 3);
    const CVector psi = gen.phases(4);
    const auto rows = effective_rows(t, b);
    const CMatrix bh = b.adjoint() * oracle::contract_vector(t, psi, 2);
    for (int n = 0; n < 3; ++n)
        EXPECT_LT((rows[n].transpose() * psi - bh.row(n).transpose()).norm(), 1e-13);
}

TEST(RateEngine, StructuredCovarianceMatchesDirect)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = random_instance(5, 3, 3, 6, seed);
        const auto h = channels_at(inst.concat, inst.psi);
        for (int k = 0; k < 3; ++k) {
            const CMatrix a = noise_covariance_structured(inst.concat[k], k, inst.bfs, inst.psi, inst.noise_var);
            const CMatrix b = noise_covariance(h[k], k, inst.bfs, inst.noise_var);
            EXPECT_LT(oracle::relative_error(a, b), 1e-12);
        }
    }
}

TEST(RateEngine, SemiQuadraticRateMatchesLogdet)
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        oracle::Gen gen(seed);
        const int M = gen.integer(1, 8), N = gen.integer(1, 4), K = gen.integer(1, 4), L = gen.integer(0, 12);
        const auto inst = random_instance(M, N, K, L, seed);
        const auto h = channels_at(inst.concat, inst.psi);
        for (int k = 0; k < K; ++k) {
            const double a = user_rate_semiquadratic(inst.concat[k], k, inst.bfs, inst.psi, inst.noise_var);
            const double b = oracle::rate_logdet_ratio(h, inst.bfs.per_ue, k, inst.noise_var);
            EXPECT_NEAR(a, b, 1e-9 * (1.0 + b));
        }
    }
}

TEST(RateEngine, ChainValuesAndDenominators)
{
    const auto inst = random_instance(4, 3, 2, 5, 3);
    const auto h = channels_at(inst.concat, inst.psi);
    const CMatrix r = noise_covariance(h[0], 0, inst.bfs, inst.noise_var);
    const auto rows = effective_rows(inst.concat[0], inst.bfs.per_ue[0]);
    const ProjChain chain = proj_chain(rows, inst.psi, oracle::inverse(r));
    ASSERT_EQ(chain.levels.size(), 3u);
    // First level: q^{ij} = u_i^T R^-1 conj(u_j).
    const CMatrix g = inst.bfs.per_ue[0].adjoint() * h[0];
    const CMatrix q1 = g * oracle::inverse(r) * g.adjoint();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(std::abs(q_value(chain, 0, i, j) - q1(i, j)), 0.0, 1e-10 * (1.0 + std::abs(q1(i, j))));
    EXPECT_THROW(q_value(chain, 3, 0, 0), DimensionError);
    for (int n = 0; n < 3; ++n)
        EXPECT_GE(q_value(chain, n, n, n).real(), -1e-12);
}

TEST(RateEngine, DeterminantFactorsMatchLu)
{
    oracle::Gen gen(32);
    for (int rep = 0; rep < 100; ++rep) {
        const int N = gen.integer(1, 8), M = gen.integer(1, 8);
        const CMatrix A = gen.matrix(N, M);
        const CMatrix G = gen.matrix(N, N);
        const CMatrix B = G * G.adjoint() + 1e-3 * CMatrix::Identity(N, N);
        const auto f = determinant_factors(A, B);
        ASSERT_EQ(f.size(), static_cast<std::size_t>(M));
        cplx prod = 1.0;
        for (auto x : f)
            prod *= x;
        const cplx want = oracle::det(CMatrix::Identity(M, M) + A.transpose() * B * A);
        EXPECT_LT(std::abs(prod - want) / std::abs(want), 1e-9);
    }
    EXPECT_THROW(determinant_factors(gen.matrix(3, 2), gen.matrix(2, 2)), DimensionError);
}

TEST(RateEngine, SumRateAtMatchesOracle)
{
    const auto inst = random_instance(4, 2, 3, 7, 5);
    const auto h = channels_at(inst.concat, inst.psi);
    double want = 0.0;
    for (int k = 0; k < 3; ++k)
        want += oracle::rate_logdet_ratio(h, inst.bfs.per_ue, k, inst.noise_var);
    EXPECT_NEAR(sum_rate_at(inst.concat, inst.bfs, inst.psi, inst.noise_var), want, 1e-10);
}
