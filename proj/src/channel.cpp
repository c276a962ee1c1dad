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

#include "risopt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace risopt {

double distance(const Vec3& a, const Vec3& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void ArrayGeometry::validate(const std::string& what) const
{
    if (horizontal < 1 || vertical < 1)
        throw ConfigError(what + ": array extents must be positive");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ConfigError(what + ": element spacing must be positive");
}

ArrayGeometry geometry_for_count(int total, double spacing)
{
    if (total < 1)
        throw ConfigError("array element count must be positive, got " + std::to_string(total));
    int v = static_cast<int>(std::sqrt(static_cast<double>(total)));
    while (v > 1 && total % v != 0)
        --v;
    return {total / v, v, spacing};
}

ArrayGeometry parse_geometry(const std::string& text, double spacing)
{
    const std::string t = trim(text);
    const auto x = t.find_first_of("xX");
    try {
        if (x == std::string::npos) {
            std::size_t pos = 0;
            const int n = std::stoi(t, &pos);
            if (pos != t.size())
                throw ConfigError("");
            return geometry_for_count(n, spacing);
        }
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        const std::string a = t.substr(0, x);
        const std::string b = t.substr(x + 1);
        ArrayGeometry g{std::stoi(a, &p1), std::stoi(b, &p2), spacing};
        if (p1 != a.size() || p2 != b.size())
            throw ConfigError("");
        g.validate("array '" + t + "'");
        return g;
    } catch (const std::logic_error&) {
        throw ConfigError("invalid array geometry '" + t + "', expected e.g. 8x4 or 32");
    } catch (const ConfigError&) {
        throw ConfigError("invalid array geometry '" + t + "', expected e.g. 8x4 or 32");
    }
}

std::string format_geometry(const ArrayGeometry& g)
{
    return std::to_string(g.horizontal) + "x" + std::to_string(g.vertical);
}

CVector upa_response(const ArrayGeometry& geom, double az, double el)
{
    const double kh = 2.0 * kPi * geom.spacing * std::cos(az) * std::sin(el);
    const double kv = 2.0 * kPi * geom.spacing * std::cos(el);
    CVector out(geom.total());
    for (int h = 0; h < geom.horizontal; ++h) {
        const cplx ah = std::polar(1.0, kh * h);
        for (int v = 0; v < geom.vertical; ++v)
            out(h * geom.vertical + v) = ah * std::polar(1.0, kv * v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// RIS response

RisResponseModel RisResponseModel::constant(cplx value)
{
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw ConfigError("RIS response constant must be finite");
    RisResponseModel m;
    m.kind_ = Kind::constant;
    m.value_ = value;
    std::ostringstream os;
    os << std::setprecision(17) << "constant:" << value.real();
    if (value.imag() != 0.0)
        os << "," << value.imag();
    m.label_ = os.str();
    return m;
}

RisResponseModel RisResponseModel::separable_cosine(double exponent)
{
    if (!std::isfinite(exponent) || exponent < 0.0)
        throw ConfigError("RIS cosine exponent must be finite and non-negative");
    RisResponseModel m;
    m.kind_ = Kind::separable_cosine;
    m.exponent_ = exponent;
    std::ostringstream os;
    os << std::setprecision(17) << "cosine:" << exponent;
    m.label_ = os.str();
    return m;
}

RisResponseModel RisResponseModel::table(std::vector<int> extents, std::vector<cplx> values)
{
    if (extents.size() != 4)
        throw ConfigError("RIS response table needs four extents");
    std::size_t total = 1;
    for (int e : extents) {
        if (e < 1)
            throw ConfigError("RIS response table extents must be positive");
        total *= static_cast<std::size_t>(e);
    }
    if (values.size() != total)
        throw ConfigError("RIS response table has " + std::to_string(values.size()) + " entries, expected " +
                          std::to_string(total));
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ConfigError("RIS response table contains a non-finite entry");
    RisResponseModel m;
    m.kind_ = Kind::table;
    m.extents_ = std::move(extents);
    m.table_ = std::move(values);
    m.label_ = "table";
    return m;
}

RisResponseModel RisResponseModel::load_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open RIS response table: " + path);
    std::vector<int> extents(4);
    for (auto& e : extents)
        if (!(in >> e))
            throw ConfigError(path + ": expected four table extents");
    std::vector<cplx> values;
    double re = 0.0;
    double im = 0.0;
    while (in >> re >> im)
        values.emplace_back(re, im);
    if (!in.eof())
        throw ConfigError(path + ": malformed table entry");
    auto m = table(std::move(extents), std::move(values));
    m.label_ = "table:" + path;
    return m;
}

RisResponseModel RisResponseModel::parse(const std::string& spec)
{
    const std::string t = trim(spec);
    const auto colon = t.find(':');
    const std::string kind = trim(t.substr(0, colon));
    const std::string arg = colon == std::string::npos ? "" : trim(t.substr(colon + 1));
    try {
        if (kind == "constant") {
            const auto parts = split_list(arg.empty() ? "1" : arg);
            if (parts.empty() || parts.size() > 2)
                throw ConfigError("");
            return constant({std::stod(parts[0]), parts.size() == 2 ? std::stod(parts[1]) : 0.0});
        }
        if (kind == "cosine")
            return separable_cosine(arg.empty() ? 1.0 : std::stod(arg));
    } catch (const std::logic_error&) {
        throw ConfigError("invalid RIS response '" + t + "'");
    }
    if (kind == "table" && !arg.empty())
        return load_table(arg);
    throw ConfigError("invalid RIS response '" + t + "', expected constant:<v>, cosine:<q> or table:<file>");
}

cplx RisResponseModel::operator()(double in_az, double in_el, double out_az, double out_el) const
{
    switch (kind_) {
    case Kind::constant:
        return value_;
    case Kind::separable_cosine: {
        const double c_in = std::abs(std::sin(in_az) * std::sin(in_el));
        const double c_out = std::abs(std::sin(out_az) * std::sin(out_el));
        return {std::pow(c_in * c_out, exponent_), 0.0};
    }
    case Kind::table: {
        auto bin = [](double angle, double lo, double hi, int n) {
            const double u = (angle - lo) / (hi - lo);
            int b = static_cast<int>(std::floor(u * n));
            return std::clamp(b, 0, n - 1);
        };
        const int i0 = bin(in_az, -kPi / 2, kPi / 2, extents_[0]);
        const int i1 = bin(in_el, 0.0, kPi / 2, extents_[1]);
        const int i2 = bin(out_az, -kPi / 2, kPi / 2, extents_[2]);
        const int i3 = bin(out_el, 0.0, kPi / 2, extents_[3]);
        const std::size_t idx =
            ((static_cast<std::size_t>(i0) * extents_[1] + i1) * extents_[2] + i2) * extents_[3] + i3;
        return table_[idx];
    }
    }
    throw InternalError("unknown RIS response kind");
}

std::string RisResponseModel::describe() const
{
    return label_;
}

// ---------------------------------------------------------------------------
// Scenario

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double ScenarioConfig::tx_power_w() const
{
    return dbm_to_watts(tx_power_dbm);
}

double ScenarioConfig::noise_w() const
{
    return dbm_to_watts(noise_dbm);
}

void ScenarioConfig::validate() const
{
    if (num_ues < 1)
        throw ConfigError("num_ues must be at least 1");
    bs_geometry.validate("bs_antennas");
    ue_geometry.validate("ue_antennas");
    ris_geometry.validate("ris_elements");
    if (paths_direct < 1 || paths_bs_ris < 1 || paths_ris_ue < 1)
        throw ConfigError("path counts must be at least 1");
    if (!(ue_area.x_max >= ue_area.x_min) || !(ue_area.y_max >= ue_area.y_min))
        throw ConfigError("ue_area must be given as x_min,x_max,y_min,y_max with min <= max");
    if (!(ref_distance > 0.0))
        throw ConfigError("ref_distance must be positive");
    if (!(nlos_excess >= 0.0))
        throw ConfigError("nlos_excess must be non-negative");
    if (!std::isfinite(pathloss_exponent_los) || !std::isfinite(pathloss_exponent_nlos))
        throw ConfigError("pathloss exponents must be finite");
    if (!(tx_power_w() > 0.0) || !std::isfinite(tx_power_w()))
        throw ConfigError("tx_power_dbm does not convert to a positive power");
    if (!(noise_w() > 0.0) || !std::isfinite(noise_w()))
        throw ConfigError("noise_dbm does not convert to a positive power");
    if (!(distance(bs_position, ris_position) > 0.0))
        throw ConfigError("BS and RIS must not coincide");
}

namespace {

Vec3 read_vec3(ConfigReader& r, const std::string& key, const Vec3& fallback)
{
    const auto v = r.get_doubles(key, {fallback.x, fallback.y, fallback.z});
    if (v.size() != 3)
        throw ConfigError(r.source() + ": key '" + key + "': expected x,y,z");
    return {v[0], v[1], v[2]};
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

ScenarioConfig read_scenario(ConfigReader& r)
{
    ScenarioConfig c;
    c.bs_position = read_vec3(r, "bs_position", c.bs_position);
    c.ris_position = read_vec3(r, "ris_position", c.ris_position);
    const auto area = r.get_doubles("ue_area", {c.ue_area.x_min, c.ue_area.x_max, c.ue_area.y_min, c.ue_area.y_max});
    if (area.size() != 4)
        throw ConfigError(r.source() + ": key 'ue_area': expected x_min,x_max,y_min,y_max");
    c.ue_area = {area[0], area[1], area[2], area[3], r.get_double("ue_height", c.ue_area.height)};
    c.num_ues = r.get_int("num_ues", c.num_ues);

    const double spacing = r.get_double("element_spacing", 0.5);
    auto geom = [&](const std::string& key, const ArrayGeometry& fallback) {
        if (!r.has(key)) {
            r.accept(key);
            ArrayGeometry g = fallback;
            g.spacing = spacing;
            return g;
        }
        try {
            return parse_geometry(r.get_string(key, ""), spacing);
        } catch (const ConfigError& e) {
            throw ConfigError(r.source() + ": key '" + key + "': " + e.what());
        }
    };
    c.bs_geometry = geom("bs_antennas", c.bs_geometry);
    c.ue_geometry = geom("ue_antennas", c.ue_geometry);
    c.ris_geometry = geom("ris_elements", c.ris_geometry);

    const int paths = r.get_int("num_paths", -1);
    if (paths > 0)
        c.paths_direct = c.paths_bs_ris = c.paths_ris_ue = paths;
    c.paths_direct = r.get_int("paths_direct", c.paths_direct);
    c.paths_bs_ris = r.get_int("paths_bs_ris", c.paths_bs_ris);
    c.paths_ris_ue = r.get_int("paths_ris_ue", c.paths_ris_ue);
    c.pathloss_exponent_los = r.get_double("pathloss_exponent_los", c.pathloss_exponent_los);
    c.pathloss_exponent_nlos = r.get_double("pathloss_exponent_nlos", c.pathloss_exponent_nlos);
    c.nlos_excess = r.get_double("nlos_excess", c.nlos_excess);
    c.ref_distance = r.get_double("ref_distance", c.ref_distance);
    c.ref_gain_bu_db = r.get_double("ref_gain_bu_db", c.ref_gain_bu_db);
    c.ref_gain_br_db = r.get_double("ref_gain_br_db", c.ref_gain_br_db);
    c.ref_gain_ru_db = r.get_double("ref_gain_ru_db", c.ref_gain_ru_db);
    c.tx_power_dbm = r.get_double("tx_power_dbm", c.tx_power_dbm);
    c.noise_dbm = r.get_double("noise_dbm", c.noise_dbm);
    c.seed = r.get_u64("seed", c.seed);

    const std::string direct = r.get_string("direct_channel", "present");
    if (direct == "present")
        c.direct = DirectChannel::present;
    else if (direct == "blocked")
        c.direct = DirectChannel::blocked;
    else
        throw ConfigError(r.source() + ": key 'direct_channel': expected present or blocked, got '" + direct + "'");

    const std::string gains = r.get_string("pair_gains", "per_pair");
    if (gains == "per_pair")
        c.pair_gains = PairGainMode::per_pair;
    else if (gains == "separable")
        c.pair_gains = PairGainMode::separable;
    else
        throw ConfigError(r.source() + ": key 'pair_gains': expected per_pair or separable, got '" + gains + "'");

    if (r.has("ris_response")) {
        try {
            c.response = RisResponseModel::parse(r.get_string("ris_response", ""));
        } catch (const ConfigError& e) {
            throw ConfigError(r.source() + ": key 'ris_response': " + e.what());
        }
    } else {
        r.accept("ris_response");
    }
    c.validate();
    return c;
}

std::string scenario_to_text(const ScenarioConfig& c)
{
    std::ostringstream os;
    auto v3 = [](const Vec3& v) { return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z); };
    os << "bs_position = " << v3(c.bs_position) << "\n";
    os << "ris_position = " << v3(c.ris_position) << "\n";
    os << "ue_area = " << fmt(c.ue_area.x_min) << "," << fmt(c.ue_area.x_max) << "," << fmt(c.ue_area.y_min) << ","
       << fmt(c.ue_area.y_max) << "\n";
    os << "ue_height = " << fmt(c.ue_area.height) << "\n";
    os << "num_ues = " << c.num_ues << "\n";
    os << "element_spacing = " << fmt(c.bs_geometry.spacing) << "\n";
    os << "bs_antennas = " << format_geometry(c.bs_geometry) << "\n";
    os << "ue_antennas = " << format_geometry(c.ue_geometry) << "\n";
    os << "ris_elements = " << format_geometry(c.ris_geometry) << "\n";
    os << "paths_direct = " << c.paths_direct << "\n";
    os << "paths_bs_ris = " << c.paths_bs_ris << "\n";
    os << "paths_ris_ue = " << c.paths_ris_ue << "\n";
    os << "pathloss_exponent_los = " << fmt(c.pathloss_exponent_los) << "\n";
    os << "pathloss_exponent_nlos = " << fmt(c.pathloss_exponent_nlos) << "\n";
    os << "nlos_excess = " << fmt(c.nlos_excess) << "\n";
    os << "ref_distance = " << fmt(c.ref_distance) << "\n";
    os << "ref_gain_bu_db = " << fmt(c.ref_gain_bu_db) << "\n";
    os << "ref_gain_br_db = " << fmt(c.ref_gain_br_db) << "\n";
    os << "ref_gain_ru_db = " << fmt(c.ref_gain_ru_db) << "\n";
    os << "tx_power_dbm = " << fmt(c.tx_power_dbm) << "\n";
    os << "noise_dbm = " << fmt(c.noise_dbm) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "direct_channel = " << (c.direct == DirectChannel::present ? "present" : "blocked") << "\n";
    os << "pair_gains = " << (c.pair_gains == PairGainMode::per_pair ? "per_pair" : "separable") << "\n";
    os << "ris_response = " << c.response.describe() << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Channel draws

std::vector<PathSpec> draw_paths(const ScenarioConfig& cfg, Substream& rng, int count, double d_los, double beta)
{
    std::vector<PathSpec> out(static_cast<std::size_t>(count));
    for (int p = 0; p < count; ++p) {
        PathSpec& s = out[static_cast<std::size_t>(p)];
        s.los = p == 0;
        s.distance = s.los ? d_los : d_los + rng.uniform(0.0, cfg.nlos_excess * d_los);
        const double alpha = s.los ? cfg.pathloss_exponent_los : cfg.pathloss_exponent_nlos;
        s.variance = beta * std::pow(s.distance / cfg.ref_distance, -alpha);
        s.aod_az = rng.uniform(-kPi / 2, kPi / 2);
        s.aod_el = rng.uniform(0.0, kPi / 2);
        s.aoa_az = rng.uniform(-kPi / 2, kPi / 2);
        s.aoa_el = rng.uniform(0.0, kPi / 2);
        s.gain = rng.complex_normal(s.variance);
    }
    return out;
}

CMatrix path_sum(const ArrayGeometry& tx, const ArrayGeometry& rx, const std::vector<PathSpec>& paths)
{
    CMatrix out = CMatrix::Zero(tx.total(), rx.total());
    for (const auto& p : paths)
        out.noalias() += p.gain * upa_response(tx, p.aod_az, p.aod_el) * upa_response(rx, p.aoa_az, p.aoa_el).adjoint();
    return out;
}

CMatrix draw_direct_channel(const ScenarioConfig& cfg, const Vec3& ue_position, Substream& rng)
{
    const double d = distance(cfg.bs_position, ue_position);
    const auto paths = draw_paths(cfg, rng, cfg.paths_direct, d, db_to_linear(cfg.ref_gain_bu_db));
    return path_sum(cfg.bs_geometry, cfg.ue_geometry, paths);
}

CMatrix draw_pair_gains(const ScenarioConfig& cfg, const std::vector<PathSpec>& bs_ris,
                        const std::vector<PathSpec>& ris_ue, Substream& rng)
{
    const auto pb_count = static_cast<Eigen::Index>(bs_ris.size());
    const auto pc_count = static_cast<Eigen::Index>(ris_ue.size());
    CMatrix g(pb_count, pc_count);
    if (cfg.pair_gains == PairGainMode::separable) {
        for (Eigen::Index b = 0; b < pb_count; ++b)
            for (Eigen::Index c = 0; c < pc_count; ++c)
                g(b, c) = bs_ris[b].gain * ris_ue[c].gain;
        return g;
    }
    const double beta_br = db_to_linear(cfg.ref_gain_br_db);
    const double beta_ru = db_to_linear(cfg.ref_gain_ru_db);
    for (Eigen::Index b = 0; b < pb_count; ++b) {
        for (Eigen::Index c = 0; c < pc_count; ++c) {
            const bool los = b == 0 && c == 0;
            const double alpha = los ? cfg.pathloss_exponent_los : cfg.pathloss_exponent_nlos;
            const double var = beta_br * std::pow(bs_ris[b].distance / cfg.ref_distance, -alpha) +
                               beta_ru * std::pow(ris_ue[c].distance / cfg.ref_distance, -alpha);
            g(b, c) = rng.complex_normal(var);
        }
    }
    return g;
}

CTensor3 ris_tensor(const ScenarioConfig& cfg, const std::vector<PathSpec>& bs_ris,
                    const std::vector<PathSpec>& ris_ue, const CMatrix& pair_gains)
{
    const auto pb_count = static_cast<Eigen::Index>(bs_ris.size());
    const auto pc_count = static_cast<Eigen::Index>(ris_ue.size());
    if (pair_gains.rows() != pb_count || pair_gains.cols() != pc_count)
        throw DimensionError("ris_tensor: pair gain matrix does not match the path counts");
    const int M = cfg.M();
    const int N = cfg.N();
    const int L = cfg.L();

    CMatrix a_bs(M, pb_count);     // a_M(theta_pb)
    CMatrix a_ris_in(L, pb_count); // a_L(phi_pb)
    for (Eigen::Index b = 0; b < pb_count; ++b) {
        a_bs.col(b) = upa_response(cfg.bs_geometry, bs_ris[b].aod_az, bs_ris[b].aod_el);
        a_ris_in.col(b) = upa_response(cfg.ris_geometry, bs_ris[b].aoa_az, bs_ris[b].aoa_el);
    }
    CMatrix a_ris_out(L, pc_count); // a_L(theta_pc)
    CMatrix a_ue(N, pc_count);      // a_N(phi_pc)
    for (Eigen::Index c = 0; c < pc_count; ++c) {
        a_ris_out.col(c) = upa_response(cfg.ris_geometry, ris_ue[c].aod_az, ris_ue[c].aod_el);
        a_ue.col(c) = upa_response(cfg.ue_geometry, ris_ue[c].aoa_az, ris_ue[c].aoa_el);
    }
    CMatrix weight(pb_count, pc_count);
    for (Eigen::Index b = 0; b < pb_count; ++b)
        for (Eigen::Index c = 0; c < pc_count; ++c)
            weight(b, c) = pair_gains(b, c) *
                           cfg.response(bs_ris[b].aoa_az, bs_ris[b].aoa_el, ris_ue[c].aod_az, ris_ue[c].aod_el);

    // Slab l = a_bs * C_l * a_ue^H with C_l(b, c) = w(b, c) conj(a_in(l, b)) a_out(l, c).
    CTensor3 out(M, L, N);
    const CMatrix a_ue_h = a_ue.adjoint();
    CMatrix c_l(pb_count, pc_count);
    for (int l = 0; l < L; ++l) {
        c_l = a_ris_in.row(l).adjoint().asDiagonal() * weight * a_ris_out.row(l).asDiagonal();
        out.slab(l).noalias() = a_bs * (c_l * a_ue_h);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Realization

int ChannelRealization::M() const
{
    return direct.empty() ? 0 : static_cast<int>(direct.front().rows());
}

int ChannelRealization::N() const
{
    return direct.empty() ? 0 : static_cast<int>(direct.front().cols());
}

int ChannelRealization::L() const
{
    return ris.empty() ? 0 : static_cast<int>(ris.front().dim2());
}

void ChannelRealization::validate() const
{
    if (direct.empty())
        throw DimensionError("realization has no UEs");
    if (ris.size() != direct.size())
        throw DimensionError("realization: direct and RIS channel counts differ");
    for (std::size_t k = 0; k < direct.size(); ++k) {
        if (direct[k].rows() != M() || direct[k].cols() != N())
            throw DimensionError("realization: direct channel sizes differ between UEs");
        if (ris[k].dim1() != M() || ris[k].dim2() != L() || ris[k].dim3() != N())
            throw DimensionError("realization: RIS tensor of UE " + std::to_string(k) + " does not match M x L x N");
    }
}

CMatrix ChannelRealization::effective_channel(int k, const CVector& phi) const
{
    if (k < 0 || k >= num_ues())
        throw DimensionError("UE index out of range");
    if (phi.size() != L())
        throw DimensionError("phase vector length " + std::to_string(phi.size()) + " does not match L = " +
                             std::to_string(L()));
    return direct[static_cast<std::size_t>(k)] + mode_product(ris[static_cast<std::size_t>(k)], phi, 2);
}

std::vector<CMatrix> ChannelRealization::effective_channels(const CVector& phi) const
{
    std::vector<CMatrix> out;
    out.reserve(direct.size());
    for (int k = 0; k < num_ues(); ++k)
        out.push_back(effective_channel(k, phi));
    return out;
}

CTensor3 ChannelRealization::concatenated(int k) const
{
    return prepend_slab(direct.at(static_cast<std::size_t>(k)), ris.at(static_cast<std::size_t>(k)));
}

ChannelRealization ChannelRealization::without_ris() const
{
    ChannelRealization out = *this;
    for (auto& t : out.ris)
        t.set_zero();
    return out;
}

ChannelRealization ChannelRealization::without_direct() const
{
    ChannelRealization out = *this;
    for (auto& d : out.direct)
        d.setZero();
    return out;
}

ChannelRealization draw_realization(const ScenarioConfig& cfg, std::uint64_t trial)
{
    cfg.validate();
    ChannelRealization out;
    const auto K = static_cast<std::size_t>(cfg.num_ues);

    Substream geo(cfg.seed, {trial, stream_id(Stream::geometry)});
    for (std::size_t k = 0; k < K; ++k) {
        const double x = geo.uniform(cfg.ue_area.x_min, cfg.ue_area.x_max);
        const double y = geo.uniform(cfg.ue_area.y_min, cfg.ue_area.y_max);
        out.ue_positions.push_back({x, y, cfg.ue_area.height});
    }

    Substream br_rng(cfg.seed, {trial, stream_id(Stream::bs_ris)});
    const auto bs_ris = draw_paths(cfg, br_rng, cfg.paths_bs_ris, distance(cfg.bs_position, cfg.ris_position),
                                   db_to_linear(cfg.ref_gain_br_db));

    for (std::size_t k = 0; k < K; ++k) {
        const Vec3& ue = out.ue_positions[k];
        if (cfg.direct == DirectChannel::present) {
            Substream d_rng(cfg.seed, {trial, k, stream_id(Stream::direct)});
            out.direct.push_back(draw_direct_channel(cfg, ue, d_rng));
        } else {
            out.direct.push_back(CMatrix::Zero(cfg.M(), cfg.N()));
        }
        Substream ru_rng(cfg.seed, {trial, k, stream_id(Stream::ris_ue)});
        const auto ris_ue = draw_paths(cfg, ru_rng, cfg.paths_ris_ue, distance(cfg.ris_position, ue),
                                       db_to_linear(cfg.ref_gain_ru_db));
        Substream g_rng(cfg.seed, {trial, k, stream_id(Stream::pair_gains)});
        const CMatrix gains = draw_pair_gains(cfg, bs_ris, ris_ue, g_rng);
        out.ris.push_back(ris_tensor(cfg, bs_ris, ris_ue, gains));
    }
    return out;
}

} // namespace risopt
