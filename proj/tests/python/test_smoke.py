# SPDX-License-Identifier: Apache-2.0
#
# risopt: joint beamforming and RIS phase-shift optimization for MIMO downlinks
# Copyright (C) 2026 The risopt authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import numpy as np
import pytest

import risopt

SMALL = {
    "num_ues": 2,
    "bs_antennas": "2x2",
    "ue_antennas": "2x1",
    "ris_elements": "4x2",
    "num_paths": 4,
    "max_outer": 20,
}


def small_scenario():
    return {k: v for k, v in SMALL.items() if k != "max_outer"}


def test_mode_product_matches_einsum():
    rng = np.random.default_rng(0)
    t = rng.standard_normal((3, 4, 2)) + 1j * rng.standard_normal((3, 4, 2))
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    out = risopt.mode_product(t, v, 2)
    np.testing.assert_allclose(out, np.einsum("ilk,l->ik", t, v), rtol=1e-12)


def test_realization_shapes():
    real = risopt.draw_realization(small_scenario(), trial=3)
    assert len(real["direct"]) == 2
    assert real["direct"][0].shape == (4, 2)
    assert real["ris"][0].shape == (4, 8, 2)
    again = risopt.draw_realization(small_scenario(), trial=3)
    np.testing.assert_array_equal(real["ris"][1], again["ris"][1])


def test_sum_rate_matches_numpy_logdet():
    real = risopt.draw_realization(small_scenario(), trial=0)
    phi = np.ones(8, dtype=complex)
    h = [d + np.einsum("ilk,l->ik", r, phi) for d, r in zip(real["direct"], real["ris"])]
    b = risopt.initial_beamformers(h, 2, 1.0)
    s2 = 1e-3
    want = 0.0
    for k, hk in enumerate(h):
        cov = [hk.conj().T @ bi @ bi.conj().T @ hk for bi in b]
        all_ = s2 * np.eye(2) + sum(cov)
        others = all_ - cov[k]
        want += np.linalg.slogdet(all_)[1] - np.linalg.slogdet(others)[1]
    assert risopt.sum_rate(h, b, s2) == pytest.approx(want, rel=1e-9)


def test_gradient_check():
    err, skipped = risopt.gradient_check(4, 2, 3, 6, seed=2)
    assert not skipped
    assert err < 1e-5


def test_maxr_trace_is_monotone():
    res = risopt.run(SMALL, "maxr", trial=1)
    trace = np.asarray(res["rate_trace"])
    assert np.all(np.diff(trace) >= -1e-9)
    np.testing.assert_allclose(np.abs(res["phi"]), 1.0, atol=1e-12)


def test_sweep_csv():
    spec = dict(SMALL, axis="ris_elements", values=[4, 8], trials=2, optimizers=["maxr", "no_ris"])
    csv, aggregates = risopt.run_sweep(spec, threads=1)
    lines = csv.strip().splitlines()
    assert len(lines) == 1 + 2 * 2 * 2
    assert {a["optimizer"] for a in aggregates} == {"maxr_wmmse", "no_ris"}
    assert csv == risopt.run_sweep(spec, threads=2)[0]


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="bogus"):
        risopt.draw_realization({"bogus": 1})
    with pytest.raises(ValueError):
        risopt.mode_product(np.zeros((2, 2, 2), dtype=complex), np.zeros(3, dtype=complex), 2)
