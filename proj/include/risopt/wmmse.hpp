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

#include "risopt/types.hpp"

#include <vector>

namespace risopt {

/// Per-UE precoders B_k (M x N) sharing one total power budget.
struct BeamformerSet {
    std::vector<CMatrix> per_ue;
    double tx_power = 1.0;

    int num_ues() const { return static_cast<int>(per_ue.size()); }
    /// Tr(B B^H) summed over UEs.
    double total_power() const;
    /// Scale all precoders so that total_power() == tx_power.
    /// Throws DegenerateError when every precoder is zero.
    void normalize();
};

/// MMSE combiners A_k and weights W_k of the WMMSE iteration.
struct WmmseState {
    std::vector<CMatrix> filters;
    std::vector<CMatrix> weights;
};

/// Interference-plus-noise covariance seen by UE k:
/// sigma^2 I + sum_{i != k} H_k^H B_i B_i^H H_k.
CMatrix noise_covariance(const CMatrix& h_k, int k, const BeamformerSet& bfs, double noise_var);

/// A_k = B_k^H H_k (sum_i H_k^H B_i B_i^H H_k + sigma^2 I)^-1.
CMatrix mmse_filter(const CMatrix& h_k, int k, const BeamformerSet& bfs, double noise_var);

/// W_k = I + B_k^H H_k R^-1 H_k^H B_k for the covariance R of UE k.
/// Throws DomainError when R is not positive definite.
CMatrix weight_matrix(const CMatrix& h_k, const CMatrix& b_k, const CMatrix& r_eff);

WmmseState wmmse_state(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var);

/// One WMMSE beamformer update from the state of `bfs`:
/// B_k ~ (sum_i H_i A_i^H W_i A_i H_i^H + (sum_i Tr(A_i^H W_i A_i)) sigma^2 / E_tx I)^-1 H_k A_k^H W_k,
/// then a common scale so the power budget is met with equality.
BeamformerSet wmmse_step(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var);
BeamformerSet wmmse_step(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, const WmmseState& state,
                         double noise_var);

/// Eigen-beamforming start: B_k spans the leading left singular vectors of
/// H_k, with zero columns when N > M, then normalised to the budget.
BeamformerSet initial_beamformers(const std::vector<CMatrix>& channels, int streams, double tx_power);

/// Rate of UE k in nats: log det(I + B_k^H H_k R^-1 H_k^H B_k).
double user_rate(const std::vector<CMatrix>& channels, int k, const BeamformerSet& bfs, double noise_var);
/// Sum of user_rate over all UEs, in nats.
double sum_rate(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, double noise_var);

inline double nats_to_bits(double nats)
{
    return nats / 0.69314718055994530942;
}

/// Runs wmmse_step until the sum-rate moves by less than `tol` nats.
struct WmmseRun {
    BeamformerSet bfs;
    std::vector<double> rate_trace;
};
WmmseRun wmmse_iterate(const std::vector<CMatrix>& channels, BeamformerSet bfs, double noise_var, int max_iters,
                       double tol);

} // namespace risopt
