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

#include "risopt/checks.hpp"

#include "risopt/rng.hpp"

#include <cmath>

namespace risopt {

RandomInstance random_instance(int M, int N, int K, int L, std::uint64_t seed)
{
    if (M < 1 || N < 1 || K < 1 || L < 0)
        throw DimensionError("random_instance: invalid dimensions");
    Substream rng(seed, {0xC0FFEEULL});
    RandomInstance inst;
    for (int k = 0; k < K; ++k) {
        CTensor3 t(M, L + 1, N);
        for (auto& z : t.data())
            z = rng.complex_normal(1.0);
        inst.concat.push_back(std::move(t));
    }
    inst.bfs.tx_power = 1.0;
    for (int k = 0; k < K; ++k) {
        CMatrix b(M, N);
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b(i) = rng.complex_normal(1.0);
        inst.bfs.per_ue.push_back(b);
    }
    inst.bfs.normalize();
    inst.psi = CVector(L + 1);
    inst.psi(0) = 1.0;
    for (int l = 1; l <= L; ++l)
        inst.psi(l) = std::polar(1.0, rng.uniform(-kPi, kPi));
    inst.noise_var = 0.1 + rng.uniform();
    return inst;
}

GradCheck gradient_check(const RandomInstance& inst, double h)
{
    GradCheck out;
    const CVector g = sum_rate_gradient(inst.concat, inst.bfs, inst.psi, inst.noise_var);
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index l = 0; l < inst.psi.size(); ++l) {
        for (int part = 0; part < 2; ++part) {
            const cplx d = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            CVector plus = inst.psi;
            CVector minus = inst.psi;
            plus(l) += d;
            minus(l) -= d;
            const double fd = (sum_rate_at(inst.concat, inst.bfs, plus, inst.noise_var) -
                               sum_rate_at(inst.concat, inst.bfs, minus, inst.noise_var)) /
                              (2.0 * h);
            const double an = part == 0 ? 2.0 * g(l).real() : -2.0 * g(l).imag();
            num += (fd - an) * (fd - an);
            den += an * an;
        }
    }
    out.grad_norm = std::sqrt(den);
    if (out.grad_norm < 1e-10) {
        out.skipped = true;
        return out;
    }
    out.rel_error = std::sqrt(num) / out.grad_norm;
    return out;
}

} // namespace risopt
