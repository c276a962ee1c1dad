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

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace risopt {

/// Flat key=value configuration. Lines are `key = value`; '#' starts a
/// comment. A file whose first non-blank character is '{' is read as a flat
/// JSON object instead.
struct KeyValueMap {
    std::map<std::string, std::string> entries;
    std::string source = "<memory>";

    bool contains(const std::string& key) const { return entries.count(key) != 0; }
};

KeyValueMap parse_key_value_text(std::string_view text, const std::string& source = "<memory>");
/// Throws IoError when the file cannot be read.
KeyValueMap load_key_value_file(const std::string& path);
/// Apply a `key=value` override on top of parsed entries.
void apply_override(KeyValueMap& map, std::string_view assignment);

/// Typed access over a KeyValueMap that remembers which keys were consumed,
/// so leftovers can be rejected as unknown.
class ConfigReader {
public:
    explicit ConfigReader(const KeyValueMap& map) : map_(map) {}

    bool has(const std::string& key) const { return map_.contains(key); }
    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key, double fallback);
    int get_int(const std::string& key, int fallback);
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);
    std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback);

    /// Mark a key as known without reading it.
    void accept(const std::string& key) { used_.insert(key); }
    /// Throws ConfigError naming the first key that no consumer read.
    void reject_unknown() const;

    const std::string& source() const { return map_.source; }

private:
    const std::string* raw(const std::string& key);
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    const KeyValueMap& map_;
    std::set<std::string> used_;
};

std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string trim(std::string_view text);

} // namespace risopt
