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

#include <cstdint>
#include <initializer_list>

namespace risopt {

/// Labels for independent random substreams of one Monte-Carlo trial.
enum class Stream : std::uint64_t {
    geometry = 1,
    direct = 2,
    bs_ris = 3,
    ris_ue = 4,
    pair_gains = 5,
    phase = 6,
};

/// Derive a substream key from a root seed and a path of integers, e.g.
/// (seed, {trial, ue, Stream::direct}).
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Counter-based generator: the n-th draw is a SplitMix64 hash of key + n, so
/// a stream is fully determined by its key and any draw can be reproduced in
/// isolation. Normal variates use Box-Muller, which keeps the sequence
/// identical across standard libraries.
class Substream {
public:
    explicit Substream(std::uint64_t key) : key_(key) {}
    Substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
        : key_(derive_key(seed, path)) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    /// Circularly-symmetric complex Gaussian CN(0, variance).
    cplx complex_normal(double variance);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline std::uint64_t stream_id(Stream s) { return static_cast<std::uint64_t>(s); }

} // namespace risopt
