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

struct WaterfillAllocation {
    RVector powers; // one per eigen-channel, in the order of the gains given
    double water_level = 0.0;
};

/// p_i = max(0, mu - 1/g_i) with sum p_i = total_power, solved exactly by
/// sorting the gains. Zero gains never receive power.
WaterfillAllocation waterfill(const RVector& gains, double total_power);

/// B = U diag(sqrt(p)) from H = U D V^H with water-filling over
/// g_i = d_i^2 / sigma^2. Always M x N; unused streams are zero columns.
/// Throws DegenerateError for an all-zero channel.
CMatrix svd_waterfill_beamformer(const CMatrix& h, int streams, double tx_power, double noise_var);

/// Single-user rate gradient with P_1 = I / sigma^2 (no interference).
CVector su_rate_gradient(const CTensor3& concat, const CMatrix& b, const CVector& psi, double noise_var);

/// Alternating SVD/water-filling beamformer and projected-gradient RIS step.
/// Requires a single UE.
OptimizerResult gd_svd(const ChannelRealization& real, double tx_power, double noise_var, const OptimizerCfg& cfg);
/// Same with the WMMSE beamformer update.
OptimizerResult gd_wmmse(const ChannelRealization& real, double tx_power, double noise_var,
                         const OptimizerCfg& cfg);

} // namespace risopt
