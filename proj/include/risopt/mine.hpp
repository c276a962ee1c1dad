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

#include "risopt/maxr.hpp"

namespace risopt {

/// E[E_k] for combiner a_k: sum_i A H^H B_i B_i^H H A^H - A H^H B_k
/// - B_k^H H A^H + I + sigma^2 A A^H.
CMatrix mse_matrix(const CMatrix& h_k, int k, const BeamformerSet& bfs, const CMatrix& a_k, double noise_var);

/// sum_k Tr(W_k E[E_k]) evaluated directly at the given channels.
double total_wmse(const std::vector<CMatrix>& channels, const BeamformerSet& bfs, const WmmseState& state,
                  double noise_var);

/// Total WMSE as a quadratic in the RIS phases:
/// phi^H quad phi + 2 Re(linear^H phi) + constant.
/// Its unconstrained minimiser with multiplier lambda solves
/// (quad + lambda I) phi = -linear.
struct MseQuadratic {
    CMatrix quad;
    CVector linear;
    double constant = 0.0;

    double evaluate(const CVector& phi) const;
    /// d/d conj(phi) of the Lagrangian with multiplier lambda I.
    CVector lagrangian_gradient(const CVector& phi, double lambda) const;
};

/// Assemble the quadratic from Z_i = B_i^H H_k A_k^H = D_i + sum_l phi_l T_{i,l}
/// over all UE pairs (k, i), with A_k and W_k taken from `state`.
MseQuadratic build_mse_quadratic(const ChannelRealization& real, const BeamformerSet& bfs, const WmmseState& state,
                                 double noise_var);

/// Largest eigenvalue of a Hermitian PSD matrix by power iteration from a
/// fixed pseudo-random start. Stops when the Rayleigh quotient moves by less
/// than tol (relative) or after max_iter iterations.
double largest_eigenvalue(const CMatrix& psd, double tol = 1e-10, int max_iter = 10000);

struct MineUpdate {
    CVector phi_star; // unconstrained stationary point
    CVector phi;      // projected to unit modulus
    double lambda = 0.0;
};

/// Stationary point with lambda = 1 / rho_max(quad), then projection.
/// quad == 0 and linear == 0 gives all-ones phases.
MineUpdate mine_phi(const MseQuadratic& mq);

/// Alternates a WMMSE beamformer update with the closed-form WMSE-minimising
/// RIS update. The rate trace is not guaranteed to be monotone.
OptimizerResult mine_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                           const OptimizerCfg& cfg);

} // namespace risopt
