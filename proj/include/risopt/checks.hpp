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

#include <cstdint>

namespace risopt {

/// Unstructured test problem: Gaussian concatenated tensors, beamformers and
/// unit-modulus phases.
struct RandomInstance {
    std::vector<CTensor3> concat;
    BeamformerSet bfs;
    CVector psi;
    double noise_var = 1.0;
};

RandomInstance random_instance(int M, int N, int K, int L, std::uint64_t seed);

struct GradCheck {
    double rel_error = 0.0;
    double grad_norm = 0.0;
    bool skipped = false; // gradient too small to compare
};

/// Analytic sum-rate gradient against central differences over the real and
/// imaginary parts of every psi entry, as a relative L2 error.
GradCheck gradient_check(const RandomInstance& inst, double h = 1e-6);

} // namespace risopt
