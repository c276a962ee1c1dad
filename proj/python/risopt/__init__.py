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

"""Joint WMMSE beamforming and RIS phase-shift optimisation."""

from ._risopt import *  # noqa: F401,F403
from ._risopt import (
    ConfigError,
    DimensionError,
    draw_realization,
    run,
    run_sweep,
)

__version__ = "0.1.0"


def concatenate(direct, ris):
    """Stack direct channel and RIS tensor into the (M, L+1, N) form used by the rate engine."""
    import numpy as np

    return [np.concatenate([d[:, None, :], r], axis=1) for d, r in zip(direct, ris)]
