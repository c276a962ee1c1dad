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

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace risopt {

std::string trim(std::string_view text)
{
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && is_space(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    return std::string(text);
}

std::vector<std::string> split_list(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::string cleaned = trim(text);
    if (!cleaned.empty() && cleaned.front() == '[' && cleaned.back() == ']')
        cleaned = cleaned.substr(1, cleaned.size() - 2);
    if (trim(cleaned).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = cleaned.find(sep, start);
        out.push_back(trim(std::string_view(cleaned).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

namespace {

std::string json_scalar_to_string(const nlohmann::json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                s += ",";
            s += json_scalar_to_string(v[i]);
        }
        return s;
    }
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return v.dump();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    throw ConfigError("unsupported JSON value: " + v.dump());
}

KeyValueMap parse_json(std::string_view text, const std::string& source)
{
    KeyValueMap out;
    out.source = source;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError(source + ": JSON config must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        out.entries[it.key()] = json_scalar_to_string(it.value());
    return out;
}

} // namespace

KeyValueMap parse_key_value_text(std::string_view text, const std::string& source)
{
    const std::string head = trim(text);
    if (!head.empty() && head.front() == '{')
        return parse_json(head, source);

    KeyValueMap out;
    out.source = source;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        out.entries[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

KeyValueMap load_key_value_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_key_value_text(ss.str(), path);
}

void apply_override(KeyValueMap& map, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty())
        throw ConfigError("override '" + std::string(assignment) + "' has an empty key");
    map.entries[key] = trim(assignment.substr(eq + 1));
}

const std::string* ConfigReader::raw(const std::string& key)
{
    used_.insert(key);
    auto it = map_.entries.find(key);
    return it == map_.entries.end() ? nullptr : &it->second;
}

void ConfigReader::fail(const std::string& key, const std::string& what) const
{
    throw ConfigError(map_.source + ": key '" + key + "': " + what);
}

std::string ConfigReader::get_string(const std::string& key, const std::string& fallback)
{
    const auto* v = raw(key);
    return v ? *v : fallback;
}

namespace {

bool parse_double(const std::string& s, double& out)
{
    const std::string t = trim(s);
    if (t.empty())
        return false;
    try {
        std::size_t pos = 0;
        out = std::stod(t, &pos);
        return pos == t.size();
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

double ConfigReader::get_double(const std::string& key, double fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    double out = 0.0;
    if (!parse_double(*v, out))
        fail(key, "expected a number, got '" + *v + "'");
    return out;
}

int ConfigReader::get_int(const std::string& key, int fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    int out = 0;
    const std::string t = trim(*v);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size())
        fail(key, "expected an integer, got '" + *v + "'");
    return out;
}

std::uint64_t ConfigReader::get_u64(const std::string& key, std::uint64_t fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    std::uint64_t out = 0;
    const std::string t = trim(*v);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size())
        fail(key, "expected a non-negative integer, got '" + *v + "'");
    return out;
}

bool ConfigReader::get_bool(const std::string& key, bool fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    std::string t = trim(*v);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on")
        return true;
    if (t == "false" || t == "0" || t == "no" || t == "off")
        return false;
    fail(key, "expected a boolean, got '" + *v + "'");
}

std::vector<double> ConfigReader::get_doubles(const std::string& key, const std::vector<double>& fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
        double d = 0.0;
        if (!parse_double(item, d))
            fail(key, "expected a list of numbers, got '" + *v + "'");
        out.push_back(d);
    }
    return out;
}

std::vector<std::string> ConfigReader::get_strings(const std::string& key, const std::vector<std::string>& fallback)
{
    const auto* v = raw(key);
    if (!v)
        return fallback;
    return split_list(*v);
}

void ConfigReader::reject_unknown() const
{
    for (const auto& [key, value] : map_.entries)
        if (!used_.count(key))
            throw ConfigError(map_.source + ": unknown key '" + key + "'");
}

} // namespace risopt
