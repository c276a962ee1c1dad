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

#pragma once

#include "risopt/channel.hpp"
#include "risopt/tensor.hpp"
#include "risopt/wmmse.hpp"

#include <vector>

namespace risopt {

/// psi = [1; phi], the phase vector extended by the direct-channel slot.
class ConcatPhase {
public:
    ConcatPhase() = default;
    /// Wraps an arbitrary psi without normalisation (used by gradient probes).
    explicit ConcatPhase(CVector psi) : psi_(std::move(psi)) {}
    static ConcatPhase from_phi(const CVector& phi);

    const CVector& psi() const { return psi_; }
    /// psi(1:) / psi(0), the phases actually applied by the RIS.
    CVector phi() const;
    /// Divide by psi(0) so the leading entry becomes 1.
    ConcatPhase gauge_fixed() const;
    Eigen::Index size() const { return psi_.size(); }

private:
    CVector psi_;
};

/// exp(j angle(x)) element-wise; zero entries map to 1.
CVector project_unit_modulus(const CVector& x);

/// H_k for every UE at concatenated phases psi: [[H_k x_2 psi]].
std::vector<CMatrix> channels_at(const std::vector<CTensor3>& concat, const CVector& psi);
std::vector<CTensor3> concatenated_tensors(const ChannelRealization& real);

/// Row sections H_bar_{k,n} = [[(H_k x_1 B_k^*)(n, :, :)]], each (L+1) x N.
/// u_n = H_bar_n^T psi is the n-th row of B_k^H H_k.
std::vector<CMatrix> effective_rows(const CTensor3& concat_k, const CMatrix& b_k);

/// Blocks T_{i,l} = B_i^H [[H_k(:, l, :)]] stacked vertically into an
/// (L+1)N x N matrix, so that B_i^H H_k = (psi^T kron I_N) T_i.
CMatrix stacked_blocks(const CTensor3& concat_k, const CMatrix& b_i);

/// Interference-plus-noise covariance R_k written as a quadratic form in
/// psi: sigma^2 I + sum_{i != k} T_i^H (conj(psi) psi^T kron I_N) T_i.
/// Independent of noise_covariance() and used to cross-check it.
CMatrix noise_covariance_structured(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                                    double noise_var);

/// Downdated projection chain P_1 = R^-1,
/// P_{n+1} = P_n - P_n conj(u_n) u_n^T P_n / (1 + u_n^T P_n conj(u_n)).
struct ProjChain {
    std::vector<CMatrix> levels; // P_1 .. P_N
    std::vector<CVector> u;      // u_1 .. u_N
};

/// Throws NumericalError when a denominator drops below 0.5.
ProjChain proj_chain(const std::vector<CMatrix>& rows, const CVector& psi, const CMatrix& r_inv);

/// q_n^{i,j} = u_i^T P_n conj(u_j), indices zero-based.
cplx q_value(const ProjChain& chain, int n, int i, int j);

/// sum_n log(1 + q_n^{n,n}), in nats.
double rate_semiquadratic(const ProjChain& chain);

/// Rate of UE k via the projection chain at phases psi.
double user_rate_semiquadratic(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                               double noise_var);

/// Sum-rate at psi for fixed beamformers, via the log-det form, in nats.
double sum_rate_at(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                   double noise_var);

/// Factors of det(I + A^T B A) = prod_m (1 + a_m^T P_m a_m) for the columns
/// a_m of A, with P_1 = B and P_{m+1} = P_m - P_m a_m a_m^T P_m / (1 + a_m^T P_m a_m).
std::vector<cplx> determinant_factors(const CMatrix& a, const CMatrix& b);

/// Hermitian inverse through a Cholesky solve.
CMatrix hermitian_inverse(const CMatrix& r);

} // namespace risopt
