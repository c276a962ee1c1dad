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

#include "risopt/cli.hpp"

#include "risopt/checks.hpp"
#include "risopt/mine.hpp"
#include "risopt/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace risopt {

namespace {

struct Common {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

KeyValueMap load_config(const Common& c)
{
    KeyValueMap map;
    map.source = "<defaults>";
    if (!c.config.empty()) {
        // Unreadable config files exit with the config code, not the I/O one.
        try {
            map = load_key_value_file(c.config);
        } catch (const IoError& e) {
            throw ConfigError(e.what());
        }
    }
    for (const auto& o : c.overrides)
        apply_override(map, o);
    if (c.seed)
        map.entries["seed"] = std::to_string(*c.seed);
    return map;
}

std::string fixed(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int cmd_run(const Common& c, const std::string& optimizer_name, const std::string& json_path, std::ostream& out,
            std::ostream& err)
{
    const KeyValueMap map = load_config(c);
    ConfigReader reader(map);
    const ScenarioConfig cfg = read_scenario(reader);
    const RunSettings settings = read_run_settings(reader);
    const auto trial = static_cast<std::uint64_t>(reader.get_u64("trial", 0));
    reader.reject_unknown();
    const std::string opt = canonical_optimizer(optimizer_name);

    const auto start = std::chrono::steady_clock::now();
    const ChannelRealization real = draw_realization(cfg, trial);
    const OptimizerResult res = run_optimizer(opt, real, cfg, settings, trial);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out << "optimizer: " << opt << "\n";
    out << "scenario: M=" << cfg.M() << " N=" << cfg.N() << " L=" << cfg.L() << " K=" << cfg.num_ues
        << " seed=" << cfg.seed << " trial=" << trial << "\n";
    out << "iter  sum_rate_bpcu\n";
    for (std::size_t t = 0; t < res.rate_trace.size(); ++t) {
        char line[64];
        std::snprintf(line, sizeof line, "%4zu  %.9f\n", t, res.rate_trace[t]);
        out << line;
    }
    double min_delta = 0.0;
    for (std::size_t t = 1; t < res.rate_trace.size(); ++t)
        min_delta = std::min(min_delta, res.rate_trace[t] - res.rate_trace[t - 1]);

    double mod_err = 0.0;
    cplx mean_phasor = 0.0;
    for (Eigen::Index l = 0; l < res.phi.size(); ++l) {
        mod_err = std::max(mod_err, std::abs(std::abs(res.phi(l)) - 1.0));
        mean_phasor += res.phi(l);
    }
    if (res.phi.size() > 0)
        mean_phasor /= static_cast<double>(res.phi.size());

    out << "final_sum_rate_bpcu: " << fixed(res.final_rate(), 9) << "\n";
    out << "outer_iterations: " << res.outer_iterations << (res.converged ? " (converged)" : " (cap reached)")
        << "\n";
    out << "rejected_steps: " << res.rejected_steps << "\n";
    out << "min_trace_delta: " << fixed(min_delta, 12) << "\n";
    out << "phi: L=" << res.phi.size() << " max_modulus_error=" << std::scientific << mod_err << std::defaultfloat
        << " mean_resultant_length=" << fixed(std::abs(mean_phasor)) << " mean_phase_rad="
        << fixed(std::arg(mean_phasor)) << "\n";
    err << "wall_time_ms: " << fixed(wall_ms, 1) << "\n";

    if (!json_path.empty()) {
        nlohmann::json j;
        j["optimizer"] = opt;
        j["seed"] = cfg.seed;
        j["trial"] = trial;
        j["M"] = cfg.M();
        j["N"] = cfg.N();
        j["L"] = cfg.L();
        j["K"] = cfg.num_ues;
        j["rate_trace_bpcu"] = res.rate_trace;
        j["wmse_trace"] = res.wmse_trace;
        j["final_sum_rate_bpcu"] = res.final_rate();
        j["outer_iterations"] = res.outer_iterations;
        j["converged"] = res.converged;
        j["rejected_steps"] = res.rejected_steps;
        std::vector<double> phases;
        for (Eigen::Index l = 0; l < res.phi.size(); ++l)
            phases.push_back(std::arg(res.phi(l)));
        j["phi_phase_rad"] = phases;
        if (json_path == "-") {
            out << j.dump(2) << "\n";
        } else {
            std::ofstream f(json_path);
            if (!f)
                throw IoError("cannot write JSON report: " + json_path);
            f << j.dump(2) << "\n";
            if (!f)
                throw IoError("failed writing JSON report: " + json_path);
        }
    }
    return exit_ok;
}

int cmd_sweep(const Common& c, std::ostream& out, std::ostream& err)
{
    if (c.config.empty())
        throw ConfigError("sweep needs --config <spec file>");
    const SweepSpec spec = read_sweep(load_config(c));
    const std::string path = c.out.empty() ? "sweep.csv" : c.out;
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open output file: " + path);
    const int threads = resolve_threads(c.threads);
    const auto result = run_sweep(spec, threads, [&](int done, int total) {
        if (done == total || done % std::max(1, total / 20) == 0)
            err << "\rtrials " << done << "/" << total << std::flush;
    });
    err << "\n";
    write_csv(f, spec, result.records);
    f.flush();
    if (!f)
        throw IoError("failed writing output file: " + path);
    out << "axis: " << axis_name(spec.axis) << "  trials/point: " << spec.trials << "  csv: " << path << "\n";
    write_aggregates(out, result.aggregates);
    return exit_ok;
}

struct GradcheckOpts {
    int M = 4;
    int N = 3;
    int K = 3;
    int L = 8;
    int instances = 20;
    std::uint64_t seed = 1;
};

int cmd_gradcheck(const GradcheckOpts& o, std::ostream& out)
{
    if (o.N > 6 || o.L > 64 || o.M < 1 || o.N < 1 || o.K < 1 || o.L < 0 || o.instances < 1)
        throw ConfigError("gradcheck needs 1 <= N <= 6, 0 <= L <= 64, M, K, instances >= 1");
    double worst = 0.0;
    int skipped = 0;
    for (int i = 0; i < o.instances; ++i) {
        const auto inst = random_instance(o.M, o.N, o.K, o.L, derive_key(o.seed, {static_cast<std::uint64_t>(i)}));
        const auto gc = gradient_check(inst);
        if (gc.skipped)
            ++skipped;
        else
            worst = std::max(worst, gc.rel_error);
    }
    const bool pass = worst <= 1e-4;
    out << "gradcheck M=" << o.M << " N=" << o.N << " K=" << o.K << " L=" << o.L << " instances=" << o.instances
        << " seed=" << o.seed << "\n";
    out << "max_relative_error: " << std::scientific << worst << std::defaultfloat << "\n";
    if (skipped)
        out << "skipped (gradient norm < 1e-10): " << skipped << "\n";
    out << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? exit_ok : exit_numerical;
}

int cmd_selftest(std::uint64_t seed, std::ostream& out)
{
    struct Row {
        std::string name;
        double value;
        double tol;
    };
    std::vector<Row> rows;

    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto inst = random_instance(5, 3, 3, 6, derive_key(seed, {1, static_cast<std::uint64_t>(i)}));
            for (int k = 0; k < inst.bfs.num_ues(); ++k) {
                const double a = user_rate_semiquadratic(inst.concat[static_cast<std::size_t>(k)], k, inst.bfs,
                                                         inst.psi, inst.noise_var);
                const double b = user_rate(channels_at(inst.concat, inst.psi), k, inst.bfs, inst.noise_var);
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
        rows.push_back({"rate log-det vs projection chain", worst, 1e-9});
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto inst = random_instance(4, 3, 3, 8, derive_key(seed, {2, static_cast<std::uint64_t>(i)}));
            const auto gc = gradient_check(inst);
            if (!gc.skipped)
                worst = std::max(worst, gc.rel_error);
        }
        rows.push_back({"sum-rate gradient vs finite differences", worst, 1e-5});
    }
    {
        ScenarioConfig cfg;
        cfg.num_ues = 2;
        cfg.ris_geometry = geometry_for_count(8);
        cfg.seed = seed;
        const auto real = draw_realization(cfg, 0);
        const CVector phi = random_phases(seed, 0, cfg.L());
        const auto channels = real.effective_channels(phi);
        const auto bfs = initial_beamformers(channels, cfg.N(), cfg.tx_power_w());
        const auto state = wmmse_state(channels, bfs, cfg.noise_w());
        const auto mq = build_mse_quadratic(real, bfs, state, cfg.noise_w());
        const double direct = total_wmse(channels, bfs, state, cfg.noise_w());
        rows.push_back({"WMSE direct vs quadratic form", std::abs(mq.evaluate(phi) - direct) / (1.0 + std::abs(direct)),
                        1e-9});

        OptimizerCfg oc;
        oc.max_outer = 30;
        const auto res = maxr_wmmse(real, cfg.tx_power_w(), cfg.noise_w(), oc);
        double min_delta = 0.0;
        for (std::size_t t = 1; t < res.rate_trace.size(); ++t)
            min_delta = std::min(min_delta, res.rate_trace[t] - res.rate_trace[t - 1]);
        rows.push_back({"MaxR-WMMSE trace decrease", -min_delta, 1e-9});
    }

    bool ok = true;
    for (const auto& r : rows) {
        const bool pass = r.value <= r.tol;
        ok = ok && pass;
        char line[160];
        std::snprintf(line, sizeof line, "%-4s %-42s %.3e (tol %.0e)\n", pass ? "ok" : "FAIL", r.name.c_str(),
                      r.value, r.tol);
        out << line;
    }
    out << (ok ? "selftest passed" : "selftest FAILED") << "\n";
    return ok ? exit_ok : exit_numerical;
}

void add_common(CLI::App* cmd, Common& c, bool with_threads)
{
    cmd->add_option("--config", c.config, "Scenario or sweep spec file (key = value, or JSON)");
    cmd->add_option("--override", c.overrides, "Override a config key: key=value (repeatable)");
    cmd->add_option("--seed", c.seed, "Root random seed (overrides the config)");
    cmd->add_option("--out", c.out, "Output file");
    if (with_threads)
        cmd->add_option("--threads", c.threads, "Worker threads (default: RISOPT_THREADS or 1)");
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"risopt: RIS phase-shift and WMMSE beamformer optimisation"};
    app.require_subcommand(1);

    Common run_c;
    std::string optimizer = "maxr_wmmse";
    std::string json_path;
    auto* run = app.add_subcommand("run", "Optimise one channel realization and print the rate trace");
    add_common(run, run_c, true);
    run->add_option("--optimizer", optimizer, "maxr_wmmse | mine_wmmse | gd_svd | gd_wmmse | random_phase | "
                                              "no_ris | wmmse_only");
    run->add_option("--json", json_path, "Also write a JSON report to this path ('-' for stdout)");

    Common sweep_c;
    auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write per-trial CSV");
    add_common(sweep, sweep_c, true);

    std::uint64_t self_seed = 1;
    auto* selftest = app.add_subcommand("selftest", "Quick numerical consistency checks");
    selftest->add_option("--seed", self_seed, "Seed for the random test instances");

    GradcheckOpts gopts;
    auto* gradcheck = app.add_subcommand("gradcheck", "Compare the analytic gradient with finite differences");
    gradcheck->add_option("--M", gopts.M, "BS antennas");
    gradcheck->add_option("--N", gopts.N, "UE antennas (<= 6)");
    gradcheck->add_option("--K", gopts.K, "UEs");
    gradcheck->add_option("--L", gopts.L, "RIS elements (<= 64)");
    gradcheck->add_option("--instances", gopts.instances, "Number of random instances");
    gradcheck->add_option("--seed", gopts.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*run)
            return cmd_run(run_c, optimizer, json_path, out, err);
        if (*sweep)
            return cmd_sweep(sweep_c, out, err);
        if (*selftest)
            return cmd_selftest(self_seed, out);
        if (*gradcheck)
            return cmd_gradcheck(gopts, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const DimensionError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}

} // namespace risopt
