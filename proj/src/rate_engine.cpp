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

#include "risopt/rate_engine.hpp"

#include <cmath>

namespace risopt {

ConcatPhase ConcatPhase::from_phi(const CVector& phi)
{
    CVector psi(phi.size() + 1);
    psi(0) = 1.0;
    psi.tail(phi.size()) = phi;
    return ConcatPhase(std::move(psi));
}

CVector ConcatPhase::phi() const
{
    if (psi_.size() == 0)
        throw DimensionError("empty concatenated phase vector");
    if (psi_(0) == cplx(0.0, 0.0))
        throw DegenerateError("leading entry of psi is zero");
    return psi_.tail(psi_.size() - 1) / psi_(0);
}

ConcatPhase ConcatPhase::gauge_fixed() const
{
    return from_phi(phi());
}

CVector project_unit_modulus(const CVector& x)
{
    CVector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out(i) = x(i) == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : std::polar(1.0, std::arg(x(i)));
    return out;
}

std::vector<CMatrix> channels_at(const std::vector<CTensor3>& concat, const CVector& psi)
{
    std::vector<CMatrix> out;
    out.reserve(concat.size());
    for (const auto& t : concat)
        out.push_back(mode_product(t, psi, 2));
    return out;
}

std::vector<CTensor3> concatenated_tensors(const ChannelRealization& real)
{
    std::vector<CTensor3> out;
    for (int k = 0; k < real.num_ues(); ++k)
        out.push_back(real.concatenated(k));
    return out;
}

std::vector<CMatrix> effective_rows(const CTensor3& concat_k, const CMatrix& b_k)
{
    if (b_k.rows() != concat_k.dim1())
        throw DimensionError("effective_rows: beamformer rows do not match the tensor");
    const CTensor3 eff = mode_product(concat_k, CMatrix(b_k.conjugate()), 1);
    std::vector<CMatrix> rows;
    rows.reserve(static_cast<std::size_t>(eff.dim1()));
    for (Eigen::Index n = 0; n < eff.dim1(); ++n)
        rows.push_back(eff.row_section(n));
    return rows;
}

CMatrix stacked_blocks(const CTensor3& concat_k, const CMatrix& b_i)
{
    const auto N = b_i.cols();
    CMatrix out(concat_k.dim2() * N, concat_k.dim3());
    for (Eigen::Index l = 0; l < concat_k.dim2(); ++l)
        out.middleRows(l * N, N).noalias() = b_i.adjoint() * concat_k.slab(l);
    return out;
}

CMatrix noise_covariance_structured(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                                    double noise_var)
{
    if (psi.size() != concat_k.dim2())
        throw DimensionError("psi length does not match the concatenated tensor");
    const auto N_ue = concat_k.dim3();
    CMatrix r = noise_var * CMatrix::Identity(N_ue, N_ue);
    for (int i = 0; i < bfs.num_ues(); ++i) {
        if (i == k)
            continue;
        const CMatrix& b = bfs.per_ue[static_cast<std::size_t>(i)];
        const CMatrix t = stacked_blocks(concat_k, b);
        const CMatrix outer = psi.conjugate() * psi.transpose();
        const auto N = b.cols();
        CMatrix kron = CMatrix::Zero(outer.rows() * N, outer.cols() * N);
        for (Eigen::Index a = 0; a < outer.rows(); ++a)
            for (Eigen::Index c = 0; c < outer.cols(); ++c)
                kron.block(a * N, c * N, N, N).diagonal().setConstant(outer(a, c));
        r.noalias() += t.adjoint() * kron * t;
    }
    return 0.5 * (r + r.adjoint());
}

CMatrix hermitian_inverse(const CMatrix& r)
{
    Eigen::LLT<CMatrix> llt(0.5 * (r + r.adjoint()));
    if (llt.info() != Eigen::Success)
        throw NumericalError("matrix is not positive definite");
    CMatrix inv = llt.solve(CMatrix::Identity(r.rows(), r.cols()));
    return 0.5 * (inv + inv.adjoint());
}

ProjChain proj_chain(const std::vector<CMatrix>& rows, const CVector& psi, const CMatrix& r_inv)
{
    ProjChain chain;
    const auto N = static_cast<int>(rows.size());
    for (const auto& h : rows) {
        if (h.rows() != psi.size())
            throw DimensionError("proj_chain: psi length does not match the effective rows");
        chain.u.push_back(h.transpose() * psi);
    }
    chain.levels.reserve(rows.size());
    chain.levels.push_back(r_inv);
    for (int n = 1; n < N; ++n) {
        const CMatrix& p = chain.levels.back();
        const CVector pc = p * chain.u[static_cast<std::size_t>(n - 1)].conjugate();
        const double denom = 1.0 + (chain.u[static_cast<std::size_t>(n - 1)].transpose() * pc)(0).real();
        if (!(denom >= 0.5))
            throw NumericalError("projection chain lost positive definiteness");
        CMatrix next = p - (pc * pc.adjoint()) / denom;
        chain.levels.push_back(0.5 * (next + next.adjoint()));
    }
    return chain;
}

cplx q_value(const ProjChain& chain, int n, int i, int j)
{
    const int N = static_cast<int>(chain.u.size());
    if (n < 0 || n >= N || i < 0 || i >= N || j < 0 || j >= N)
        throw DimensionError("q_value: index out of range");
    const auto& p = chain.levels[static_cast<std::size_t>(n)];
    return (chain.u[static_cast<std::size_t>(i)].transpose() * p * chain.u[static_cast<std::size_t>(j)].conjugate()).value();
}

double rate_semiquadratic(const ProjChain& chain)
{
    double r = 0.0;
    for (int n = 0; n < static_cast<int>(chain.u.size()); ++n) {
        const double q = q_value(chain, n, n, n).real();
        if (!(1.0 + q >= 0.5))
            throw NumericalError("projection chain lost positive definiteness");
        r += std::log1p(q);
    }
    return r;
}

double user_rate_semiquadratic(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                               double noise_var)
{
    const CMatrix h = mode_product(concat_k, psi, 2);
    const CMatrix r = noise_covariance(h, k, bfs, noise_var);
    const auto rows = effective_rows(concat_k, bfs.per_ue.at(static_cast<std::size_t>(k)));
    return rate_semiquadratic(proj_chain(rows, psi, hermitian_inverse(r)));
}

double sum_rate_at(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                   double noise_var)
{
    return sum_rate(channels_at(concat, psi), bfs, noise_var);
}

std::vector<cplx> determinant_factors(const CMatrix& a, const CMatrix& b)
{
    if (b.rows() != b.cols() || b.rows() != a.rows())
        throw DimensionError("determinant_factors: B must be square and match the rows of A");
    std::vector<cplx> out;
    CMatrix p = b;
    for (Eigen::Index m = 0; m < a.cols(); ++m) {
        const CVector col = a.col(m);
        const CVector pa = p * col;                            // P a
        const Eigen::RowVectorXcd ap = col.transpose() * p;    // a^T P
        const cplx f = 1.0 + (col.transpose() * pa)(0);
        out.push_back(f);
        if (m + 1 < a.cols())
            p -= (pa * ap) / f;
    }
    return out;
}

} // namespace risopt
