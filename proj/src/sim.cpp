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

#include "risopt/sim.hpp"

#include "risopt/mine.hpp"
#include "risopt/rng.hpp"
#include "risopt/su_mimo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace risopt {

SweepAxis parse_axis(const std::string& name)
{
    static const std::map<std::string, SweepAxis> axes{
        {"ris_elements", SweepAxis::ris_elements}, {"num_ues", SweepAxis::num_ues},
        {"bs_antennas", SweepAxis::bs_antennas},   {"ue_antennas", SweepAxis::ue_antennas},
        {"tx_power_dbm", SweepAxis::tx_power_dbm}, {"num_paths", SweepAxis::num_paths},
    };
    auto it = axes.find(name);
    if (it == axes.end())
        throw ConfigError("unknown sweep axis '" + name + "'");
    return it->second;
}

std::string axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::ris_elements:
        return "ris_elements";
    case SweepAxis::num_ues:
        return "num_ues";
    case SweepAxis::bs_antennas:
        return "bs_antennas";
    case SweepAxis::ue_antennas:
        return "ue_antennas";
    case SweepAxis::tx_power_dbm:
        return "tx_power_dbm";
    case SweepAxis::num_paths:
        return "num_paths";
    }
    throw InternalError("unknown sweep axis");
}

const std::vector<std::string>& optimizer_names()
{
    static const std::vector<std::string> names{"maxr_wmmse", "mine_wmmse", "gd_svd",   "gd_wmmse",
                                                "random_phase", "no_ris",   "wmmse_only"};
    return names;
}

std::string canonical_optimizer(const std::string& name)
{
    static const std::map<std::string, std::string> aliases{
        {"maxr", "maxr_wmmse"}, {"mine", "mine_wmmse"}, {"svd", "gd_svd"}, {"random", "random_phase"},
        {"wmmse", "wmmse_only"},
    };
    const std::string t = trim(name);
    if (auto it = aliases.find(t); it != aliases.end())
        return it->second;
    const auto& names = optimizer_names();
    if (std::find(names.begin(), names.end(), t) == names.end())
        throw ConfigError("unknown optimizer '" + t + "'");
    return t;
}

RunSettings read_run_settings(ConfigReader& r)
{
    RunSettings s;
    s.optimizer.max_outer = r.get_int("max_outer", s.optimizer.max_outer);
    s.optimizer.tol_bpcu = r.get_double("tol_bpcu", s.optimizer.tol_bpcu);
    s.optimizer.patience = r.get_int("patience", s.optimizer.patience);
    s.optimizer.line_search.beta_max = r.get_double("beta_max", s.optimizer.line_search.beta_max);
    s.optimizer.line_search.beta_min = r.get_double("beta_min", s.optimizer.line_search.beta_min);
    s.optimizer.line_search.iterations = r.get_int("line_search_iterations", s.optimizer.line_search.iterations);
    const std::string init = r.get_string("phi_init", "ones");
    if (init == "ones")
        s.phi_init = PhiInit::ones;
    else if (init == "random")
        s.phi_init = PhiInit::random;
    else
        throw ConfigError(r.source() + ": key 'phi_init': expected ones or random, got '" + init + "'");
    try {
        s.optimizer.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(r.source() + ": " + e.what());
    }
    return s;
}

CVector random_phases(std::uint64_t seed, std::uint64_t trial, int L)
{
    Substream rng(seed, {trial, stream_id(Stream::phase)});
    CVector phi(L);
    for (int l = 0; l < L; ++l)
        phi(l) = std::polar(1.0, rng.uniform(-kPi, kPi));
    return phi;
}

OptimizerResult run_optimizer(const std::string& name, const ChannelRealization& real, const ScenarioConfig& cfg,
                              const RunSettings& settings, std::uint64_t trial)
{
    const std::string opt = canonical_optimizer(name);
    OptimizerCfg oc = settings.optimizer;
    if (settings.phi_init == PhiInit::random || opt == "random_phase")
        oc.phi_init = random_phases(cfg.seed, trial, real.L());
    const double p = cfg.tx_power_w();
    const double s2 = cfg.noise_w();
    if (opt == "maxr_wmmse")
        return maxr_wmmse(real, p, s2, oc);
    if (opt == "mine_wmmse")
        return mine_wmmse(real, p, s2, oc);
    if (opt == "gd_svd")
        return gd_svd(real, p, s2, oc);
    if (opt == "gd_wmmse")
        return gd_wmmse(real, p, s2, oc);
    if (opt == "random_phase" || opt == "wmmse_only")
        return wmmse_fixed_phase(real, p, s2, oc);
    if (opt == "no_ris")
        return wmmse_fixed_phase(real.without_ris(), p, s2, oc);
    throw InternalError("optimizer '" + opt + "' has no implementation");
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw ConfigError("sweep needs at least one axis value");
    if (trials < 1)
        throw ConfigError("sweep needs at least one trial per point");
    if (optimizers.empty())
        throw ConfigError("sweep needs at least one optimizer");
    for (double v : values) {
        const ScenarioConfig c = apply_axis(base, axis, v);
        c.validate();
        for (const auto& o : optimizers)
            if ((o == "gd_svd" || o == "gd_wmmse") && c.num_ues != 1)
                throw ConfigError("optimizer '" + o + "' needs num_ues = 1");
    }
    settings.optimizer.validate();
}

SweepSpec read_sweep(const KeyValueMap& map)
{
    ConfigReader r(map);
    SweepSpec s;
    s.base = read_scenario(r);
    s.settings = read_run_settings(r);
    if (!r.has("axis"))
        throw ConfigError(map.source + ": sweep needs key 'axis'");
    s.axis = parse_axis(r.get_string("axis", ""));
    s.values = r.get_doubles("values", {});
    s.trials = r.get_int("trials", s.trials);
    for (const auto& o : r.get_strings("optimizers", {"maxr_wmmse", "mine_wmmse", "random_phase", "no_ris"}))
        s.optimizers.push_back(canonical_optimizer(o));
    s.record_timing = r.get_bool("record_timing", false);
    r.reject_unknown();
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(map.source + ": " + e.what());
    }
    return s;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value)
{
    ScenarioConfig c = base;
    auto count = [&]() {
        const double r = std::round(value);
        if (std::abs(r - value) > 1e-9 || r < 1.0)
            throw ConfigError("axis " + axis_name(axis) + " needs positive integer values");
        return static_cast<int>(r);
    };
    switch (axis) {
    case SweepAxis::ris_elements:
        c.ris_geometry = geometry_for_count(count(), base.ris_geometry.spacing);
        break;
    case SweepAxis::num_ues:
        c.num_ues = count();
        break;
    case SweepAxis::bs_antennas:
        c.bs_geometry = geometry_for_count(count(), base.bs_geometry.spacing);
        break;
    case SweepAxis::ue_antennas:
        c.ue_geometry = geometry_for_count(count(), base.ue_geometry.spacing);
        break;
    case SweepAxis::tx_power_dbm:
        c.tx_power_dbm = value;
        break;
    case SweepAxis::num_paths:
        c.paths_direct = c.paths_bs_ris = c.paths_ris_ue = count();
        break;
    }
    return c;
}

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("RISOPT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return 1;
}

SweepResult run_sweep(const SweepSpec& spec, int threads, const std::function<void(int, int)>& progress)
{
    spec.validate();
    const int points = static_cast<int>(spec.values.size());
    const int units = points * spec.trials;
    const std::size_t per_unit = spec.optimizers.size();
    std::vector<TrialRecord> records(static_cast<std::size_t>(units) * per_unit);

    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    std::mutex progress_mutex;

    auto worker = [&]() {
        while (true) {
            const int u = next.fetch_add(1);
            if (u >= units)
                return;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (error)
                    return;
            }
            try {
                const int point = u / spec.trials;
                const int trial = u % spec.trials;
                const double value = spec.values[static_cast<std::size_t>(point)];
                const ScenarioConfig cfg = apply_axis(spec.base, spec.axis, value);
                const ChannelRealization real = draw_realization(cfg, static_cast<std::uint64_t>(trial));
                for (std::size_t o = 0; o < per_unit; ++o) {
                    const auto start = std::chrono::steady_clock::now();
                    const OptimizerResult res =
                        run_optimizer(spec.optimizers[o], real, cfg, spec.settings, static_cast<std::uint64_t>(trial));
                    const auto stop = std::chrono::steady_clock::now();
                    TrialRecord& rec = records[static_cast<std::size_t>(u) * per_unit + o];
                    rec.axis_value = value;
                    rec.trial = trial;
                    rec.optimizer = spec.optimizers[o];
                    rec.sum_rate_bpcu = res.final_rate();
                    rec.outer_iters = res.outer_iterations;
                    rec.wall_ms = spec.record_timing
                                      ? std::chrono::duration<double, std::milli>(stop - start).count()
                                      : 0.0;
                    rec.seed = cfg.seed;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
            const int d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, units);
            }
        }
    };

    const int n = std::max(1, std::min(threads, units));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);

    SweepResult out;
    out.records = std::move(records);
    out.aggregates = aggregate(out.records);
    return out;
}

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records)
{
    // Keep first-appearance order of axis values and optimizers.
    std::vector<std::pair<double, std::string>> keys;
    std::map<std::pair<double, std::string>, std::vector<double>> groups;
    for (const auto& r : records) {
        auto key = std::make_pair(r.axis_value, r.optimizer);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted)
            keys.push_back(key);
        it->second.push_back(r.sum_rate_bpcu);
    }
    std::vector<Aggregate> out;
    for (const auto& key : keys) {
        const auto& v = groups[key];
        Aggregate a;
        a.axis_value = key.first;
        a.optimizer = key.second;
        a.count = static_cast<int>(v.size());
        double s = 0.0;
        for (double x : v)
            s += x;
        a.mean = s / a.count;
        if (a.count > 1) {
            double ss = 0.0;
            for (double x : v)
                ss += (x - a.mean) * (x - a.mean);
            a.std_error = std::sqrt(ss / (a.count - 1)) / std::sqrt(static_cast<double>(a.count));
        }
        out.push_back(a);
    }
    return out;
}

namespace {

std::string num(double v, const char* fmt = "%.10g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<TrialRecord>& records)
{
    out << "axis,axis_value,trial,optimizer,sum_rate_bpcu,outer_iters,wall_ms,seed\n";
    const std::string axis = axis_name(spec.axis);
    for (const auto& r : records) {
        out << axis << ',' << num(r.axis_value) << ',' << r.trial << ',' << r.optimizer << ','
            << num(r.sum_rate_bpcu, "%.12g") << ',' << r.outer_iters << ',' << num(r.wall_ms, "%.3f") << ','
            << r.seed << '\n';
    }
}

void write_aggregates(std::ostream& out, const std::vector<Aggregate>& aggregates)
{
    char line[160];
    std::snprintf(line, sizeof line, "%12s  %-14s %7s %12s %10s\n", "axis_value", "optimizer", "trials", "mean_bpcu",
                  "std_err");
    out << line;
    for (const auto& a : aggregates) {
        std::snprintf(line, sizeof line, "%12.6g  %-14s %7d %12.6f %10.6f\n", a.axis_value, a.optimizer.c_str(),
                      a.count, a.mean, a.std_error);
        out << line;
    }
}

} // namespace risopt
