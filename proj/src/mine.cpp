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

#include "risopt/mine.hpp"

#include "risopt/rng.hpp"

#include <cmath>

namespace risopt {

CMatrix mse_matrix(const CMatrix& h_k, int k, const BeamformerSet& bfs, const CMatrix& a_k, double noise_var)
{
    const auto N = a_k.rows();
    const CMatrix ah = a_k * h_k.adjoint(); // A H^H
    CMatrix e = CMatrix::Identity(N, N) + noise_var * a_k * a_k.adjoint();
    for (int i = 0; i < bfs.num_ues(); ++i) {
        const CMatrix z = ah * bfs.per_ue[static_cast<std::size_t>(i)];
        e.noalias() += z * z.adjoint();
    }
    const CMatrix zk = ah * bfs.per_ue.at(static_cast<std::size_t>(k));
    e -= zk + zk.adjoint();
    return e;
}

double total_wmse(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, const WmmseState& state,
                  double noise_var)
{
    double s = 0.0;
    for (int k = 0; k < bfs.num_ues(); ++k) {
        const auto uk = static_cast<std::size_t>(k);
        s += (state.weights[uk] * mse_matrix(channels[uk], k, bfs, state.filters[uk], noise_var)).trace().real();
    }
    return s;
}

double MseQuadratic::evaluate(const CVector& phi) const
{
    return (phi.adjoint() * quad * phi).value().real() + 2.0 * linear.dot(phi).real() + constant;
}

CVector MseQuadratic::lagrangian_gradient(const CVector& phi, double lambda) const
{
    return quad * phi + linear + lambda * phi;
}

MseQuadratic build_mse_quadratic(const ChannelRealization& real, const BeamformerSet& bfs, const WmmseState& state,
                                 double noise_var)
{
    real.validate();
    const int K = real.num_ues();
    const int L = real.L();
    MseQuadratic mq;
    mq.quad = CMatrix::Zero(L, L);
    CVector conj_linear = CVector::Zero(L);

    for (int k = 0; k < K; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const CMatrix& a = state.filters[uk];
        const CMatrix& w = state.weights[uk];
        const auto N = a.rows();
        const CMatrix a_h = a.adjoint();
        Eigen::LLT<CMatrix> llt(0.5 * (w + w.adjoint()));
        if (llt.info() != Eigen::Success)
            throw NumericalError("weight matrix is not positive definite");
        const CMatrix w_root = llt.matrixL(); // W = w_root w_root^H

        CMatrix interference_sum = CMatrix::Zero(N, N); // sum_i D_i^H D_i
        CMatrix d_k;
        for (int i = 0; i < K; ++i) {
            const CMatrix& b = bfs.per_ue[static_cast<std::size_t>(i)];
            const CMatrix b_h = b.adjoint();
            const CMatrix d = b_h * real.direct[uk] * a_h;
            interference_sum.noalias() += d.adjoint() * d;
            if (i == k)
                d_k = d;
            const CMatrix wd = w * d.adjoint(); // W D^H

            // Column l of f is vec(T_l w_root), so Tr(W T_l^H T_m) = f(:, l)^H f(:, m).
            CMatrix f(N * N, L);
            for (int l = 0; l < L; ++l) {
                const CMatrix t = b_h * real.ris[uk].slab(l) * a_h;
                const CMatrix tw = t * w_root;
                f.col(l) = Eigen::Map<const CVector>(tw.data(), tw.size());
                // Tr(W D^H T) - [i == k] Tr(W T)
                cplx lin = (wd.transpose().cwiseProduct(t)).sum();
                if (i == k)
                    lin -= (w.transpose().cwiseProduct(t)).sum();
                conj_linear(l) += lin;
            }
            mq.quad.noalias() += f.adjoint() * f;
        }
        const CMatrix inner = interference_sum - d_k - d_k.adjoint() + CMatrix::Identity(N, N) +
                              noise_var * a * a_h;
        mq.constant += (w * inner).trace().real();
    }
    mq.quad = 0.5 * (mq.quad + mq.quad.adjoint());
    mq.linear = conj_linear.conjugate();
    return mq;
}

double largest_eigenvalue(const CMatrix& psd, double tol, int max_iter)
{
    if (psd.rows() != psd.cols())
        throw DimensionError("largest_eigenvalue: matrix is not square");
    const auto n = psd.rows();
    if (n == 0)
        return 0.0;
    Substream rng(0x5EEDULL, {0x9E37ULL});
    CVector x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        x(i) = rng.complex_normal(1.0);
    x.normalize();
    double rho = (x.adjoint() * psd * x).value().real();
    for (int it = 0; it < max_iter; ++it) {
        CVector y = psd * x;
        const double norm = y.norm();
        if (!(norm > 0.0))
            return 0.0;
        x = y / norm;
        const double next = (x.adjoint() * psd * x).value().real();
        const bool done = std::abs(next - rho) <= tol * std::max(std::abs(next), 1e-300);
        rho = next;
        if (done)
            break;
    }
    return rho;
}

MineUpdate mine_phi(const MseQuadratic& mq)
{
    const auto L = mq.linear.size();
    MineUpdate out;
    const double rho = largest_eigenvalue(mq.quad);
    if (!(rho > 0.0)) {
        out.lambda = 0.0;
        out.phi_star = -mq.linear;
        out.phi = project_unit_modulus(out.phi_star);
        return out;
    }
    out.lambda = 1.0 / rho;
    const CMatrix sys = mq.quad + out.lambda * CMatrix::Identity(L, L);
    Eigen::LLT<CMatrix> llt(sys);
    if (llt.info() != Eigen::Success)
        throw NumericalError("MinE system matrix is not positive definite");
    CVector x = llt.solve(-mq.linear);
    // One round of iterative refinement keeps the residual at round-off level.
    x += llt.solve(-mq.linear - sys * x);
    out.phi_star = x;
    out.phi = project_unit_modulus(x);
    return out;
}

OptimizerResult mine_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                           const OptimizerCfg& cfg)
{
    cfg.validate();
    real.validate();
    OptimizerResult res;
    res.phi = initial_phi(cfg, real.L());
    auto channels = real.effective_channels(res.phi);
    res.bfs = initial_beamformers(channels, real.N(), tx_power);
    res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));

    for (int t = 0; t < cfg.max_outer; ++t) {
        res.bfs = wmmse_step(channels, res.bfs, noise_var);
        const WmmseState state = wmmse_state(channels, res.bfs, noise_var);
        const MseQuadratic mq = build_mse_quadratic(real, res.bfs, state, noise_var);
        res.phi = mine_phi(mq).phi;
        channels = real.effective_channels(res.phi);
        res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));
        res.wmse_trace.push_back(mq.evaluate(res.phi));
        res.outer_iterations = t + 1;
        if (trace_settled(res.rate_trace, cfg.tol_bpcu, cfg.patience)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace risopt
