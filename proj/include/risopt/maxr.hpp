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
#include "risopt/rate_engine.hpp"
#include "risopt/wmmse.hpp"

#include <vector>

namespace risopt {

// All gradients here are Wirtinger derivatives d/dpsi with conj(psi) held
// constant. The real gradient of a real f with psi = x + jy is
// df/dx = 2 Re g, df/dy = -2 Im g, and the ascent direction is conj(g).

/// dR_k/dpsi_l for the interference covariance of UE k.
CMatrix grad_noise_cov(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi, int ell);

/// q-values and their gradients for one UE, level by level. Level n holds
/// entries (i, j) with i, j >= n; other entries are left empty.
struct QTable {
    int N = 0;
    std::vector<CMatrix> q;                      // q[n](i, j)
    std::vector<std::vector<CVector>> grad;      // grad[n][i * N + j]

    const CVector& g(int n, int i, int j) const { return grad[static_cast<std::size_t>(n)][static_cast<std::size_t>(i * N + j)]; }
};

/// Level-1 gradients of q^{i,j} = u_i^T R^-1 conj(u_j), including the
/// dependence of R on psi. Returned as an N x N table of (L+1)-vectors.
std::vector<CVector> grad_q_first(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi,
                                  double noise_var, CMatrix* q_out = nullptr);

/// Extend level 0 (q and grad filled) to all levels with the quotient-rule
/// recursion q_{n+1}^{i,j} = q_n^{i,j} - q_n^{i,n} q_n^{n,j} / (1 + q_n^{n,n}).
/// Throws InternalError when a prerequisite entry is missing.
void grad_q_recursive(QTable& table);

QTable q_table(const CTensor3& concat_k, int k, const BeamformerSet& bfs, const CVector& psi, double noise_var);

/// d R_k / d psi = sum_n grad q_n^{n,n} / (1 + q_n^{n,n}).
CVector user_rate_gradient(const QTable& table);
/// Gradient of the sum-rate (nats) with respect to psi for fixed beamformers.
CVector sum_rate_gradient(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                          double noise_var);

struct LineSearchCfg {
    double beta_max = 100.0;
    double beta_min = 0.0;
    int iterations = 30;
    void validate() const;
};

struct MaxrStep {
    CVector psi;   // gauge-fixed, psi(0) == 1
    double rate = 0.0;
    double beta = 0.0;
    bool improved = false;
};

/// One projected ascent step psi' = exp(j angle(psi + beta conj(grad))) with
/// beta from bisection on [beta_min, beta_max]. The last improving beta is
/// kept; when none improves psi is returned unchanged.
MaxrStep maxr_step(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                   double noise_var, const LineSearchCfg& cfg);
/// Same step for a precomputed gradient.
MaxrStep ascent_step(const std::vector<CTensor3>& concat, const BeamformerSet& bfs, const CVector& psi,
                     const CVector& grad, double noise_var, const LineSearchCfg& cfg);

/// Settings shared by the alternating optimizers.
struct OptimizerCfg {
    int max_outer = 2000;
    double tol_bpcu = 1e-6;
    /// Consecutive outer iterations with |delta rate| < tol_bpcu before stopping.
    int patience = 1;
    LineSearchCfg line_search;
    /// Starting phases; empty means all ones.
    CVector phi_init;
    void validate() const;
};

struct OptimizerResult {
    BeamformerSet bfs;
    CVector phi;
    /// Sum-rate in bpcu after initialisation and after every outer iteration.
    std::vector<double> rate_trace;
    /// Total WMSE after every outer iteration (MinE only).
    std::vector<double> wmse_trace;
    int outer_iterations = 0;
    int rejected_steps = 0;
    bool converged = false;

    double final_rate() const { return rate_trace.empty() ? 0.0 : rate_trace.back(); }
};

CVector initial_phi(const OptimizerCfg& cfg, int L);

/// True when the last `patience` deltas of a rate trace are all below tol.
bool trace_settled(const std::vector<double>& trace, double tol, int patience);

/// Alternates a WMMSE beamformer update with one projected-gradient RIS step.
OptimizerResult maxr_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                           const OptimizerCfg& cfg);

/// WMMSE beamforming only, RIS phases held at the initial value.
OptimizerResult wmmse_fixed_phase(const ChannelRealization& real, double tx_power, double noise_var,
                                  const OptimizerCfg& cfg);

} // namespace risopt
