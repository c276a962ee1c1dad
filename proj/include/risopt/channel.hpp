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

#include "risopt/config.hpp"
#include "risopt/rng.hpp"
#include "risopt/tensor.hpp"
#include "risopt/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risopt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

/// Uniform planar array. Element spacing is given in wavelengths.
struct ArrayGeometry {
    int horizontal = 1;
    int vertical = 1;
    double spacing = 0.5;

    int total() const { return horizontal * vertical; }
    void validate(const std::string& what) const;
};

/// Most-square factorisation of an element count, wider than tall:
/// 32 -> 8x4, 64 -> 8x8, 8 -> 4x2, 7 -> 7x1.
ArrayGeometry geometry_for_count(int total, double spacing = 0.5);
/// Parse "8x4" or a bare count.
ArrayGeometry parse_geometry(const std::string& text, double spacing = 0.5);
std::string format_geometry(const ArrayGeometry& g);

/// UPA steering vector: kron(horizontal, vertical) with
/// horizontal[m] = exp(j 2 pi d m cos(az) sin(el)) and
/// vertical[m] = exp(j 2 pi d m cos(el)).
CVector upa_response(const ArrayGeometry& geom, double az, double el);

/// One propagation path. Departure angles refer to the transmitting node,
/// arrival angles to the receiving one.
struct PathSpec {
    cplx gain{0.0, 0.0};
    double aoa_az = 0.0;
    double aoa_el = 0.0;
    double aod_az = 0.0;
    double aod_el = 0.0;
    double distance = 0.0;
    /// Variance of `gain`: beta * (distance / d_ref)^(-alpha).
    double variance = 0.0;
    bool los = false;
};

/// Element response of the RIS for a pair of incident (from the BS) and
/// departing (towards the UE) directions.
class RisResponseModel {
public:
    enum class Kind { constant, separable_cosine, table };

    static RisResponseModel constant(cplx value);
    /// (|sin(az_in) sin(el_in)| * |sin(az_out) sin(el_out)|)^exponent, the
    /// product of the direction cosines against the panel normal.
    static RisResponseModel separable_cosine(double exponent);
    /// Nearest-bin lookup on a regular grid over (in_az, in_el, out_az,
    /// out_el) with azimuths in [-pi/2, pi/2] and elevations in [0, pi/2].
    /// `values` is ordered with in_az slowest and out_el fastest.
    static RisResponseModel table(std::vector<int> extents, std::vector<cplx> values);
    /// Text file: first line "n1 n2 n3 n4", then one "re im" pair per entry.
    static RisResponseModel load_table(const std::string& path);
    /// "constant:<re>[,<im>]", "cosine:<exponent>" or "table:<path>".
    static RisResponseModel parse(const std::string& spec);

    cplx operator()(double in_az, double in_el, double out_az, double out_el) const;

    Kind kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    cplx value_{1.0, 0.0};
    double exponent_ = 1.0;
    std::vector<int> extents_;
    std::vector<cplx> table_;
    std::string label_;
};

enum class DirectChannel { present, blocked };
/// per_pair: every (p_b, p_c) pair draws its own gain with the summed
/// variance of both links. separable: gain = gamma_pb * gamma_pc, which with
/// a constant response is the conventional diagonal RIS model.
enum class PairGainMode { per_pair, separable };

struct UeArea {
    double x_min = 25.0;
    double x_max = 75.0;
    double y_min = 10.0;
    double y_max = 40.0;
    double height = 1.5;
};

struct ScenarioConfig {
    Vec3 bs_position{0.0, 0.0, 35.0};
    Vec3 ris_position{50.0, 0.0, 15.0};
    UeArea ue_area;
    int num_ues = 4;
    ArrayGeometry bs_geometry{4, 2, 0.5};
    ArrayGeometry ue_geometry{2, 2, 0.5};
    ArrayGeometry ris_geometry{8, 4, 0.5};
    int paths_direct = 16;
    int paths_bs_ris = 16;
    int paths_ris_ue = 16;
    double pathloss_exponent_los = 2.5;
    double pathloss_exponent_nlos = 3.0;
    /// NLoS excess distance is drawn from U[0, nlos_excess * d_LoS].
    double nlos_excess = 0.4;
    double ref_distance = 1.0;
    double ref_gain_bu_db = -80.0;
    double ref_gain_br_db = -112.0;
    double ref_gain_ru_db = -112.0;
    double tx_power_dbm = 30.0;
    double noise_dbm = -104.0;
    std::uint64_t seed = 1;
    DirectChannel direct = DirectChannel::present;
    PairGainMode pair_gains = PairGainMode::per_pair;
    RisResponseModel response = RisResponseModel::separable_cosine(1.0);

    int M() const { return bs_geometry.total(); }
    int N() const { return ue_geometry.total(); }
    int L() const { return ris_geometry.total(); }
    double tx_power_w() const;
    double noise_w() const;
    void validate() const;
};

double dbm_to_watts(double dbm);
double db_to_linear(double db);

/// Reads the scenario keys, leaving others untouched for the caller.
ScenarioConfig read_scenario(ConfigReader& reader);
/// Key=value text that read_scenario turns back into `cfg`.
std::string scenario_to_text(const ScenarioConfig& cfg);

/// Draw `count` paths for a link whose LoS length is `d_los`. Path 0 is the
/// LoS path. Angles are uniform: azimuth in [-pi/2, pi/2], elevation in
/// [0, pi/2]. Gains are CN(0, beta * (d / d_ref)^-alpha).
std::vector<PathSpec> draw_paths(const ScenarioConfig& cfg, Substream& rng, int count, double d_los,
                                 double beta);

/// sum_p gain_p a_tx(aod_p) a_rx(aoa_p)^H, a tx.total() x rx.total() matrix.
CMatrix path_sum(const ArrayGeometry& tx, const ArrayGeometry& rx, const std::vector<PathSpec>& paths);

/// Direct BS -> UE channel H_d (M x N).
CMatrix draw_direct_channel(const ScenarioConfig& cfg, const Vec3& ue_position, Substream& rng);

/// Gains gamma(p_b, p_c) of the cascaded path pairs.
CMatrix draw_pair_gains(const ScenarioConfig& cfg, const std::vector<PathSpec>& bs_ris,
                        const std::vector<PathSpec>& ris_ue, Substream& rng);

/// RIS channel tensor (M x L x N):
/// sum_{pb, pc} gain(pb, pc) Omega(pb, pc) (a_M a_L^H)_pb (.)_2 (a_L a_N^H)_pc.
CTensor3 ris_tensor(const ScenarioConfig& cfg, const std::vector<PathSpec>& bs_ris,
                    const std::vector<PathSpec>& ris_ue, const CMatrix& pair_gains);

/// Channels of all UEs for one Monte-Carlo trial.
struct ChannelRealization {
    std::vector<CMatrix> direct;
    std::vector<CTensor3> ris;
    std::vector<Vec3> ue_positions;

    int num_ues() const { return static_cast<int>(direct.size()); }
    int M() const;
    int N() const;
    int L() const;
    void validate() const;

    /// H_k = H_d,k + [[H_R,k x_2 phi]].
    CMatrix effective_channel(int k, const CVector& phi) const;
    std::vector<CMatrix> effective_channels(const CVector& phi) const;
    /// [H_d,k : H_R,k], M x (L+1) x N.
    CTensor3 concatenated(int k) const;

    ChannelRealization without_ris() const;
    ChannelRealization without_direct() const;
};

/// Full draw for trial `trial`: UE drop, shared BS-RIS paths, per-UE direct
/// and RIS-UE paths. Each piece uses its own derived substream, so results
/// do not depend on the order in which trials are generated.
ChannelRealization draw_realization(const ScenarioConfig& cfg, std::uint64_t trial);

} // namespace risopt
