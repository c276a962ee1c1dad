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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace risopt;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "risopt");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    std::ostringstream out, err;
    Result r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_file(const std::string& name, const std::string& text)
{
    const std::string path = testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

const char* kSmall = "num_ues = 2\n"
                     "bs_antennas = 2x2\n"
                     "ue_antennas = 2x1\n"
                     "ris_elements = 4x2\n"
                     "num_paths = 4\n"
                     "max_outer = 10\n";

} // namespace

TEST(Cli, MissingConfigIsConfigError)
{
    const auto r = cli({"run", "--config", "/nonexistent/scenario.cfg"});
    EXPECT_EQ(r.code, exit_config);
    EXPECT_NE(r.err.find("/nonexistent/scenario.cfg"), std::string::npos);
}

TEST(Cli, UnknownKeyIsNamed)
{
    const auto path = write_file("cli_bad.cfg", std::string(kSmall) + "num_uez = 3\n");
    const auto r = cli({"run", "--config", path});
    EXPECT_EQ(r.code, exit_config);
    EXPECT_NE(r.err.find("num_uez"), std::string::npos);
}

TEST(Cli, RunIsDeterministicAndMonotone)
{
    const auto path = write_file("cli_small.cfg", kSmall);
    const auto a = cli({"run", "--config", path, "--optimizer", "maxr", "--seed", "7"});
    const auto b = cli({"run", "--config", path, "--optimizer", "maxr", "--seed", "7"});
    ASSERT_EQ(a.code, exit_ok) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("final_sum_rate_bpcu"), std::string::npos);
    EXPECT_NE(a.err.find("wall_time_ms"), std::string::npos);
    const auto pos = a.out.find("min_trace_delta: ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GE(std::stod(a.out.substr(pos + 17)), -1e-9);
    const auto c = cli({"run", "--config", path, "--optimizer", "maxr", "--seed", "8"});
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, RunWritesJson)
{
    const auto path = write_file("cli_small.cfg", kSmall);
    const auto r = cli({"run", "--config", path, "--override", "max_outer=3", "--json", "-"});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("\"rate_trace_bpcu\""), std::string::npos);
    const auto bad = cli({"run", "--config", path, "--json", "/nonexistent/dir/out.json"});
    EXPECT_EQ(bad.code, exit_io);
}

TEST(Cli, SweepRowsAndErrors)
{
    const auto spec = write_file("cli_sweep.cfg", std::string(kSmall) +
                                                      "axis = ris_elements\nvalues = 4, 8, 16\ntrials = 2\n"
                                                      "optimizers = maxr, no_ris\n");
    const std::string out = testing::TempDir() + "cli_sweep.csv";
    const auto r = cli({"sweep", "--config", spec, "--out", out, "--threads", "2"});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    std::ifstream f(out);
    std::string line;
    int lines = 0;
    while (std::getline(f, line))
        ++lines;
    EXPECT_EQ(lines, 1 + 3 * 2 * 2);
    std::remove(out.c_str());

    EXPECT_EQ(cli({"sweep", "--config", spec, "--out", "/nonexistent/dir/x.csv"}).code, exit_io);
    const auto empty = write_file("cli_empty.cfg", "axis = ris_elements\nvalues = []\n");
    EXPECT_EQ(cli({"sweep", "--config", empty, "--out", out}).code, exit_config);
    EXPECT_EQ(cli({"sweep"}).code, exit_config);
}

TEST(Cli, GradcheckAndSelftest)
{
    const auto g = cli({"gradcheck", "--instances", "5"});
    EXPECT_EQ(g.code, exit_ok) << g.out;
    EXPECT_EQ(cli({"gradcheck", "--N", "1", "--instances", "3"}).code, exit_ok);
    EXPECT_EQ(cli({"gradcheck", "--N", "7"}).code, exit_config);
    EXPECT_EQ(cli({"gradcheck", "--L", "65"}).code, exit_config);
    const auto s = cli({"selftest"});
    EXPECT_EQ(s.code, exit_ok) << s.out;
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(cli({"frobnicate"}).code, exit_config);
    EXPECT_EQ(cli({"run", "--optimizer", "sgd"}).code, exit_config);
    EXPECT_EQ(cli({"--help"}).code, exit_ok);
}
