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

#include "risopt/wmmse.hpp"

#include "risopt/tensor.hpp"

#include <cmath>

namespace risopt {

namespace {

void check_noise(double noise_var)
{
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw DomainError("noise variance must be positive and finite");
}

void check_channels(const std::vector<CMatrix>& channels, const BeamformerSet& bfs)
{
    if (channels.size() != bfs.per_ue.size())
        throw DimensionError("number of channels and beamformers differ");
    for (std::size_t k = 0; k < channels.size(); ++k)
        if (bfs.per_ue[k].rows() != channels[k].rows())
            throw DimensionError("beamformer rows do not match the BS antenna count");
}

CMatrix hermitian_part(const CMatrix& a)
{
    return 0.5 * (a + a.adjoint());
}

} // namespace

double BeamformerSet::total_power() const
{
    double p = 0.0;
    for (const auto& b : per_ue)
        p += b.squaredNorm();
    return p;
}

void BeamformerSet::normalize()
{
    const double p = total_power();
    if (!(p > 0.0) || !std::isfinite(p))
        throw DegenerateError("cannot normalise an all-zero beamformer set");
    const double s = std::sqrt(tx_power / p);
    for (auto& b : per_ue)
        b *= s;
}

CMatrix noise_covariance(const CMatrix& h_k, int k, const BeamformerSet& bfs, double noise_var)
{
    check_noise(noise_var);
    const auto N = h_k.cols();
    CMatrix r = noise_var * CMatrix::Identity(N, N);
    for (int i = 0; i < bfs.num_ues(); ++i) {
        if (i == k)
            continue;
        const CMatrix y = bfs.per_ue[static_cast<std::size_t>(i)].adjoint() * h_k;
        r.noalias() += y.adjoint() * y;
    }
    return hermitian_part(r);
}

CMatrix mmse_filter(const CMatrix& h_k, int k, const BeamformerSet& bfs, double noise_var)
{
    const CMatrix& b_k = bfs.per_ue.at(static_cast<std::size_t>(k));
    CMatrix r = noise_covariance(h_k, k, bfs, noise_var);
    const CMatrix g = b_k.adjoint() * h_k;
    r.noalias() += g.adjoint() * g;
    // A = G R^-1  <=>  R A^H = G^H (R Hermitian).
    Eigen::LLT<CMatrix> llt(hermitian_part(r));
    if (llt.info() != Eigen::Success)
        throw NumericalError("receive covariance is not positive definite");
    return llt.solve(g.adjoint()).adjoint();
}

CMatrix weight_matrix(const CMatrix& h_k, const CMatrix& b_k, const CMatrix& r_eff)
{
    if (r_eff.rows() != h_k.cols() || r_eff.cols() != h_k.cols())
        throw DimensionError("weight_matrix: covariance does not match the UE antenna count");
    Eigen::LLT<CMatrix> llt(hermitian_part(r_eff));
    if (llt.info() != Eigen::Success || hermitian_defect(r_eff) > 1e-10 * std::max(1.0, r_eff.cwiseAbs().maxCoeff()))
        throw DomainError("weight_matrix: covariance is not Hermitian positive definite");
    const CMatrix g = b_k.adjoint() * h_k;
    const auto n = g.rows();
    return hermitian_part(CMatrix::Identity(n, n) + g * llt.solve(g.adjoint()));
}

WmmseState wmmse_state(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var)
{
    check_channels(channels, bfs);
    WmmseState s;
    for (int k = 0; k < bfs.num_ues(); ++k) {
        const CMatrix& h = channels[static_cast<std::size_t>(k)];
        s.filters.push_back(mmse_filter(h, k, bfs, noise_var));
        s.weights.push_back(weight_matrix(h, bfs.per_ue[static_cast<std::size_t>(k)],
                                          noise_covariance(h, k, bfs, noise_var)));
    }
    return s;
}

BeamformerSet wmmse_step(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var)
{
    return wmmse_step(channels, bfs, wmmse_state(channels, bfs, noise_var), noise_var);
}

BeamformerSet wmmse_step(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, const WmmseState& state,
                         double noise_var)
{
    check_channels(channels, bfs);
    check_noise(noise_var);
    if (!(bfs.tx_power > 0.0))
        throw DomainError("transmit power must be positive");
    const auto M = channels.front().rows();
    CMatrix gram = CMatrix::Zero(M, M);
    double trace_sum = 0.0;
    std::vector<CMatrix> rhs;
    rhs.reserve(channels.size());
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const CMatrix& a = state.filters[i];
        const CMatrix& w = state.weights[i];
        const CMatrix ha = channels[i] * a.adjoint(); // H_i A_i^H
        gram.noalias() += ha * w * ha.adjoint();
        trace_sum += (a.adjoint() * w * a).trace().real();
        rhs.push_back(ha * w);
    }
    gram += (trace_sum * noise_var / bfs.tx_power) * CMatrix::Identity(M, M);
    Eigen::LLT<CMatrix> llt(hermitian_part(gram));
    if (llt.info() != Eigen::Success)
        throw DegenerateError("WMMSE Gram matrix is singular");

    BeamformerSet out;
    out.tx_power = bfs.tx_power;
    for (auto& r : rhs)
        out.per_ue.push_back(llt.solve(r));
    out.normalize();
    return out;
}

BeamformerSet initial_beamformers(const std::vector<CMatrix>& channels, int streams, double tx_power)
{
    BeamformerSet out;
    out.tx_power = tx_power;
    for (const auto& h : channels) {
        const auto M = h.rows();
        CMatrix b = CMatrix::Zero(M, streams);
        if (h.squaredNorm() > 0.0) {
            Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeThinU);
            const auto r = std::min<Eigen::Index>(streams, svd.matrixU().cols());
            b.leftCols(r) = svd.matrixU().leftCols(r);
        } else {
            const auto r = std::min<Eigen::Index>(streams, M);
            b.topLeftCorner(r, r).setIdentity();
        }
        out.per_ue.push_back(b);
    }
    out.normalize();
    return out;
}

double user_rate(const std::vector<CMatrix>& channels, int k, const BeamformerSet& bfs, double noise_var)
{
    const CMatrix& h = channels.at(static_cast<std::size_t>(k));
    const CMatrix w = weight_matrix(h, bfs.per_ue[static_cast<std::size_t>(k)], noise_covariance(h, k, bfs, noise_var));
    return logdet_hermitian_psd(w);
}

double sum_rate(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var)
{
    check_channels(channels, bfs);
    double s = 0.0;
    for (int k = 0; k < bfs.num_ues(); ++k)
        s += user_rate(channels, k, bfs, noise_var);
    return s;
}

WmmseRun wmmse_iterate(const std::vector<CMatrix>& channels, BeamformerSet bfs, double noise_var, int max_iters,
                       double tol)
{
    WmmseRun run;
    run.rate_trace.push_back(sum_rate(channels, bfs, noise_var));
    for (int t = 0; t < max_iters; ++t) {
        bfs = wmmse_step(channels, bfs, noise_var);
        run.rate_trace.push_back(sum_rate(channels, bfs, noise_var));
        const auto n = run.rate_trace.size();
        if (std::abs(run.rate_trace[n - 1] - run.rate_trace[n - 2]) < tol)
            break;
    }
    run.bfs = std::move(bfs);
    return run;
}

} // namespace risopt
