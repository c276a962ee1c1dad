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
#include "risopt/config.hpp"
#include "risopt/maxr.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace risopt {

enum class SweepAxis { ris_elements, num_ues, bs_antennas, ue_antennas, tx_power_dbm, num_paths };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

/// Canonical optimizer names, in the order used for output.
const std::vector<std::string>& optimizer_names();
/// Maps aliases ("maxr", "mine", "svd", ...) to the canonical name.
/// Throws ConfigError for unknown names.
std::string canonical_optimizer(const std::string& name);

/// How optimizers pick their starting phases.
enum class PhiInit { ones, random };

/// Optimizer settings read from a config: max_outer, tol_bpcu, patience, beta_max,
/// beta_min, line_search_iterations, phi_init.
struct RunSettings {
    OptimizerCfg optimizer;
    PhiInit phi_init = PhiInit::ones;
};
RunSettings read_run_settings(ConfigReader& reader);

/// Random phases of trial `trial`, drawn from their own substream.
CVector random_phases(std::uint64_t seed, std::uint64_t trial, int L);

/// Run one named optimizer (or baseline) on a realization.
OptimizerResult run_optimizer(const std::string& name, const ChannelRealization& real, const ScenarioConfig& cfg,
                              const RunSettings& settings, std::uint64_t trial);

struct SweepSpec {
    SweepAxis axis = SweepAxis::ris_elements;
    std::vector<double> values;
    int trials = 100;
    ScenarioConfig base;
    std::vector<std::string> optimizers;
    RunSettings settings;
    /// Write measured wall times; off by default so output is reproducible.
    bool record_timing = false;

    void validate() const;
};

/// Reads scenario keys, run settings and axis, values, trials, optimizers,
/// record_timing. Rejects unknown keys.
SweepSpec read_sweep(const KeyValueMap& map);

/// Scenario for one point of the sweep axis.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct TrialRecord {
    double axis_value = 0.0;
    int trial = 0;
    std::string optimizer;
    double sum_rate_bpcu = 0.0;
    int outer_iters = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
};

struct Aggregate {
    double axis_value = 0.0;
    std::string optimizer;
    int count = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

struct SweepResult {
    std::vector<TrialRecord> records;
    std::vector<Aggregate> aggregates;
};

/// Runs every (axis value, trial) unit on `threads` workers. Each unit draws
/// one realization and runs all optimizers on it. Records come back sorted by
/// (axis value, trial, optimizer order), independent of the thread count.
SweepResult run_sweep(const SweepSpec& spec, int threads,
                      const std::function<void(int done, int total)>& progress = {});

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records);

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<TrialRecord>& records);
void write_aggregates(std::ostream& out, const std::vector<Aggregate>& aggregates);

/// Thread count from an explicit value (> 0), else RISOPT_THREADS, else 1.
int resolve_threads(int requested);

} // namespace risopt
