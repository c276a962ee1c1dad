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

#include "risopt/config.hpp"
#include "risopt/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace risopt;

TEST(Config, ParsesKeyValueText)
{
    const auto map = parse_key_value_text("# comment\n num_ues = 3 \nvalues=[16, 32]\n\nname = a b # trailing\n");
    EXPECT_EQ(map.entries.at("num_ues"), "3");
    EXPECT_EQ(map.entries.at("name"), "a b");
    ConfigReader r(map);
    EXPECT_EQ(r.get_int("num_ues", 0), 3);
    EXPECT_EQ(r.get_doubles("values", {}), (std::vector<double>{16.0, 32.0}));
    EXPECT_EQ(r.get_string("name", ""), "a b");
    EXPECT_NO_THROW(r.reject_unknown());
}

TEST(Config, ParsesJsonObject)
{
    const auto map = parse_key_value_text(R"({"num_ues": 2, "values": [8, 16], "blocked": true, "tag": "x"})");
    ConfigReader r(map);
    EXPECT_EQ(r.get_int("num_ues", 0), 2);
    EXPECT_EQ(r.get_doubles("values", {}), (std::vector<double>{8.0, 16.0}));
    EXPECT_TRUE(r.get_bool("blocked", false));
    EXPECT_EQ(r.get_string("tag", ""), "x");
    EXPECT_THROW(parse_key_value_text("{\"a\": "), ConfigError);
    EXPECT_THROW(parse_key_value_text("[1, 2]"), ConfigError);
}

TEST(Config, OverridesReplaceEntries)
{
    auto map = parse_key_value_text("seed = 1\n");
    apply_override(map, "seed=7");
    apply_override(map, "num_ues = 2");
    EXPECT_EQ(map.entries.at("seed"), "7");
    EXPECT_EQ(map.entries.at("num_ues"), "2");
    EXPECT_THROW(apply_override(map, "seed"), ConfigError);
    EXPECT_THROW(apply_override(map, "=3"), ConfigError);
}

TEST(Config, UnknownKeyIsNamed)
{
    const auto map = parse_key_value_text("num_ues = 3\nnum_uess = 4\n", "scenario.cfg");
    ConfigReader r(map);
    r.get_int("num_ues", 0);
    try {
        r.reject_unknown();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("num_uess"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("scenario.cfg"), std::string::npos);
    }
}

TEST(Config, BadValuesNameTheKey)
{
    const auto map = parse_key_value_text("num_ues = three\nflag = maybe\nx = 1.5e\n");
    ConfigReader r(map);
    EXPECT_THROW(r.get_int("num_ues", 0), ConfigError);
    EXPECT_THROW(r.get_bool("flag", false), ConfigError);
    try {
        r.get_double("x", 0.0);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
    }
    EXPECT_THROW(parse_key_value_text("just words\n"), ConfigError);
}

TEST(Config, MissingFileIsIoError)
{
    EXPECT_THROW(load_key_value_file("/nonexistent/dir/file.cfg"), IoError);
}

TEST(Config, SplitAndTrim)
{
    EXPECT_EQ(split_list("[a, b ,c]"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(split_list("").empty());
    EXPECT_EQ(trim("  x y \t"), "x y");
}

TEST(Rng, StreamsAreReproducibleAndIndependent)
{
    Substream a(42, {1, 2, 3});
    Substream b(42, {1, 2, 3});
    Substream c(42, {1, 2, 4});
    Substream d(43, {1, 2, 3});
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
        EXPECT_NE(x, d.next_u64());
    }
    EXPECT_NE(derive_key(1, {2, 3}), derive_key(1, {3, 2}));
}

TEST(Rng, UniformAndNormalMoments)
{
    Substream s(7, {stream_id(Stream::geometry)});
    const int n = 200000;
    double su = 0.0, su2 = 0.0, sn = 0.0, sn2 = 0.0, sc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        su2 += u * u;
        const double z = s.normal();
        sn += z;
        sn2 += z * z;
        sc += std::norm(s.complex_normal(2.0));
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(su2 / n - 0.25, 1.0 / 12.0, 0.002);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.02);
    EXPECT_NEAR(sc / n, 2.0, 0.04);
}
