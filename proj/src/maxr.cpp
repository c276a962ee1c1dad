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

#include "risopt/maxr.hpp"

#include <cmath>

namespace risopt {

CMatrix grad_noise_cov(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi, int ell)
{
    if (ell < 0 || ell >= concat_k.dim2())
        throw DimensionError("grad_noise_cov: element index out of range");
    if (psi.size() != concat_k.dim2())
        throw DimensionError("grad_noise_cov: psi length does not match the tensor");
    const CMatrix h = mode_product(concat_k, psi, 2);
    const auto N = concat_k.dim3();
    CMatrix out = CMatrix::Zero(N, N);
    for (int i = 0; i < bfs.num_ues(); ++i) {
        if (i == k)
            continue;
        const CMatrix& b = bfs.per_ue[static_cast<std::size_t>(i)];
        out.noalias() += (b.adjoint() * h).adjoint() * (b.adjoint() * concat_k.slab(ell));
    }
    return out;
}

std::vector<CVector> grad_q_first(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                                  double noise_var, CMatrix* q_out)
{
    const CMatrix& b_k = bfs.per_ue.at(static_cast<std::size_t>(k));
    const CMatrix h = mode_product(concat_k, psi, 2);
    const auto M = h.rows();
    const auto S = b_k.cols();
    const CMatrix r_inv = hermitian_inverse(noise_covariance(h, k, bfs, noise_var));
    const CMatrix x = b_k.adjoint() * h; // row i is u_i^T

    CMatrix interf = CMatrix::Zero(M, M);
    for (int i = 0; i < bfs.num_ues(); ++i)
        if (i != k)
            interf.noalias() += bfs.per_ue[static_cast<std::size_t>(i)] * bfs.per_ue[static_cast<std::size_t>(i)].adjoint();

    // v_j = R^-1 conj(u_j) as columns; q(i, j) = u_i^T v_j.
    const CMatrix v = r_inv * x.adjoint();
    if (q_out)
        *q_out = x * v;

    // w_i = conj(B_k e_i) - (u_i^T R^-1 H^H Q)^T, the mode-1 weight of q's derivative.
    const CMatrix correction = (x * r_inv * h.adjoint() * interf).transpose(); // column i is r_i
    std::vector<CVector> out(static_cast<std::size_t>(S * S));
    for (Eigen::Index i = 0; i < S; ++i) {
        const CVector w = b_k.col(i).conjugate() - correction.col(i);
        const CMatrix z = mode_product(concat_k, w, 1); // (L+1) x N
        const CMatrix zv = z * v;
        for (Eigen::Index j = 0; j < S; ++j)
            out[static_cast<std::size_t>(i * S + j)] = zv.col(j);
    }
    return out;
}

void grad_q_recursive(QTable& t)
{
    const int N = t.N;
    if (static_cast<int>(t.q.size()) < 1 || t.grad.empty())
        throw InternalError("grad_q_recursive: level 1 is missing");
    t.q.resize(static_cast<std::size_t>(N));
    t.grad.resize(static_cast<std::size_t>(N));
    for (int n = 0; n + 1 < N; ++n) {
        const auto& qn = t.q[static_cast<std::size_t>(n)];
        const auto& gn = t.grad[static_cast<std::size_t>(n)];
        if (gn.size() != static_cast<std::size_t>(N * N))
            throw InternalError("grad_q_recursive: level " + std::to_string(n + 1) + " is incomplete");
        auto need = [&](int i, int j) -> const CVector& {
            const CVector& g = gn[static_cast<std::size_t>(i * N + j)];
            if (g.size() == 0)
                throw InternalError("grad_q_recursive: missing gradient entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") at level " + std::to_string(n + 1));
            return g;
        };
        const cplx d = 1.0 + qn(n, n);
        const CVector& g_nn = need(n, n);
        CMatrix qnext = CMatrix::Zero(N, N);
        std::vector<CVector> gnext(static_cast<std::size_t>(N * N));
        for (int i = n + 1; i < N; ++i) {
            for (int j = n + 1; j < N; ++j) {
                const cplx a = qn(i, n);
                const cplx c = qn(n, j);
                qnext(i, j) = qn(i, j) - a * c / d;
                gnext[static_cast<std::size_t>(i * N + j)] =
                    need(i, j) - ((need(i, n) * c + a * need(n, j)) * d - (a * c) * g_nn) / (d * d);
            }
        }
        t.q[static_cast<std::size_t>(n + 1)] = std::move(qnext);
        t.grad[static_cast<std::size_t>(n + 1)] = std::move(gnext);
    }
}

QTable q_table(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi, double noise_var)
{
    QTable t;
    t.N = static_cast<int>(bfs.per_ue.at(static_cast<std::size_t>(k)).cols());
    CMatrix q1;
    t.grad.push_back(grad_q_first(concat_k, k, bfs, psi, noise_var, &q1));
    t.q.push_back(q1);
    grad_q_recursive(t);
    return t;
}

CVector user_rate_gradient(const QTable& t)
{
    CVector g;
    for (int n = 0; n < t.N; ++n) {
        const cplx d = 1.0 + t.q[static_cast<std::size_t>(n)](n, n);
        if (g.size() == 0)
            g = t.g(n, n, n) / d;
        else
            g += t.g(n, n, n) / d;
    }
    return g;
}

CVector sum_rate_gradient(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                          double noise_var)
{
    if (concat.size() != bfs.per_ue.size())
        throw DimensionError("sum_rate_gradient: channel and beamformer counts differ");
    CVector g = CVector::Zero(psi.size());
    for (int k = 0; k < bfs.num_ues(); ++k)
        g += user_rate_gradient(q_table(concat[static_cast<std::size_t>(k)], k, bfs, psi, noise_var));
    return g;
}

void LineSearchCfg::validate() const
{
    if (!(beta_max > beta_min) || !(beta_min >= 0.0))
        throw ConfigError("line search needs beta_max > beta_min >= 0");
    if (iterations < 1)
        throw ConfigError("line search needs at least one iteration");
}

MaxrStep ascent_step(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                     const CVector& grad, double noise_var, const LineSearchCfg& cfg)
{
    MaxrStep out;
    out.psi = psi;
    out.rate = sum_rate_at(concat, bfs, psi, noise_var);
    if (!(grad.norm() > 0.0) || !std::isfinite(grad.norm()))
        return out;

    const CVector dir = grad.conjugate();
    double lo = cfg.beta_min;
    double hi = cfg.beta_max;
    CVector best;
    double best_rate = out.rate;
    for (int it = 0; it < cfg.iterations; ++it) {
        const double beta = 0.5 * (lo + hi);
        const CVector cand = project_unit_modulus(psi + beta * dir);
        const double r = sum_rate_at(concat, bfs, cand, noise_var);
        if (r > out.rate) {
            lo = beta;
            best = cand;
            best_rate = r;
            out.beta = beta;
        } else {
            hi = beta;
        }
    }
    if (best.size() != 0) {
        out.psi = ConcatPhase(best).gauge_fixed().psi();
        out.rate = best_rate;
        out.improved = true;
    }
    return out;
}

MaxrStep maxr_step(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                   double noise_var, const LineSearchCfg& cfg)
{
    return ascent_step(concat, bfs, psi, sum_rate_gradient(concat, bfs, psi, noise_var), noise_var, cfg);
}

void OptimizerCfg::validate() const
{
    if (max_outer < 0)
        throw ConfigError("max_outer must be non-negative");
    if (patience < 1)
        throw ConfigError("patience must be at least 1");
    if (!(tol_bpcu >= 0.0))
        throw ConfigError("tolerance must be non-negative");
    line_search.validate();
}

CVector initial_phi(const OptimizerCfg& cfg, int L)
{
    if (cfg.phi_init.size() == 0)
        return CVector::Ones(L);
    if (cfg.phi_init.size() != L)
        throw DimensionError("initial phase vector has length " + std::to_string(cfg.phi_init.size()) +
                             ", expected " + std::to_string(L));
    return project_unit_modulus(cfg.phi_init);
}

namespace {

bool settled(OptimizerResult& res, const OptimizerCfg& cfg)
{
    res.converged = trace_settled(res.rate_trace, cfg.tol_bpcu, cfg.patience);
    return res.converged;
}

} // namespace

bool trace_settled(const std::vector<double>& trace, double tol, int patience)
{
    const auto n = trace.size();
    if (patience < 1 || n < static_cast<std::size_t>(patience) + 1)
        return false;
    for (std::size_t i = n - static_cast<std::size_t>(patience); i < n; ++i)
        if (!(std::abs(trace[i] - trace[i - 1]) < tol))
            return false;
    return true;
}

OptimizerResult maxr_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                           const OptimizerCfg& cfg)
{
    cfg.validate();
    real.validate();
    const auto concat = concatenated_tensors(real);
    CVector psi = ConcatPhase::from_phi(initial_phi(cfg, real.L())).psi();

    OptimizerResult res;
    auto channels = channels_at(concat, psi);
    res.bfs = initial_beamformers(channels, real.N(), tx_power);
    res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));

    for (int t = 0; t < cfg.max_outer; ++t) {
        res.bfs = wmmse_step(channels, res.bfs, noise_var);
        const MaxrStep step = maxr_step(concat, res.bfs, psi, noise_var, cfg.line_search);
        if (step.improved)
            psi = step.psi;
        else
            ++res.rejected_steps;
        channels = channels_at(concat, psi);
        res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));
        res.outer_iterations = t + 1;
        if (settled(res, cfg))
            break;
    }
    res.phi = ConcatPhase(psi).phi();
    return res;
}

OptimizerResult wmmse_fixed_phase(const ChannelRealization& real, double tx_power, double noise_var,
                                  const OptimizerCfg& cfg)
{
    cfg.validate();
    real.validate();
    OptimizerResult res;
    res.phi = initial_phi(cfg, real.L());
    const auto channels = real.effective_channels(res.phi);
    res.bfs = initial_beamformers(channels, real.N(), tx_power);
    res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));
    for (int t = 0; t < cfg.max_outer; ++t) {
        res.bfs = wmmse_step(channels, res.bfs, noise_var);
        res.rate_trace.push_back(nats_to_bits(sum_rate(channels, res.bfs, noise_var)));
        res.outer_iterations = t + 1;
        if (settled(res, cfg))
            break;
    }
    return res;
}

} // namespace risopt
