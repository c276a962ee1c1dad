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

#include "risopt/checks.hpp"
#include "risopt/mine.hpp"
#include "risopt/sim.hpp"
#include "risopt/su_mimo.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace risopt;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CTensor3 to_tensor(const CArray& a)
{
    if (a.ndim() != 3)
        throw DimensionError("expected a 3-D complex array");
    auto r = a.unchecked<3>();
    CTensor3 t(r.shape(0), r.shape(1), r.shape(2));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < r.shape(1); ++j)
            for (py::ssize_t k = 0; k < r.shape(2); ++k)
                t(i, j, k) = r(i, j, k);
    return t;
}

CArray from_tensor(const CTensor3& t)
{
    CArray a({t.dim1(), t.dim2(), t.dim3()});
    auto w = a.mutable_unchecked<3>();
    for (Eigen::Index i = 0; i < t.dim1(); ++i)
        for (Eigen::Index j = 0; j < t.dim2(); ++j)
            for (Eigen::Index k = 0; k < t.dim3(); ++k)
                w(i, j, k) = t(i, j, k);
    return a;
}

std::vector<CTensor3> to_tensors(const std::vector<CArray>& arrays)
{
    std::vector<CTensor3> out;
    for (const auto& a : arrays)
        out.push_back(to_tensor(a));
    return out;
}

BeamformerSet to_bfs(const std::vector<CMatrix>& b, double tx_power)
{
    BeamformerSet s;
    s.per_ue = b;
    s.tx_power = tx_power;
    return s;
}

KeyValueMap config_from(const py::object& cfg)
{
    if (cfg.is_none())
        return {};
    if (py::isinstance<py::str>(cfg))
        return parse_key_value_text(cfg.cast<std::string>(), "<python>");
    KeyValueMap map;
    map.source = "<python>";
    for (auto item : cfg.cast<py::dict>()) {
        const auto key = py::str(item.first).cast<std::string>();
        py::handle v = item.second;
        std::string value;
        if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
            for (auto x : v) {
                if (!value.empty())
                    value += ",";
                value += py::str(x).cast<std::string>();
            }
        } else if (py::isinstance<py::bool_>(v)) {
            value = v.cast<bool>() ? "true" : "false";
        } else {
            value = py::str(v).cast<std::string>();
        }
        map.entries[key] = value;
    }
    return map;
}

ScenarioConfig scenario_from(const py::object& cfg)
{
    const KeyValueMap map = config_from(cfg);
    ConfigReader r(map);
    ScenarioConfig s = read_scenario(r);
    r.reject_unknown();
    return s;
}

py::dict realization_dict(const ChannelRealization& real)
{
    py::list ris;
    for (const auto& t : real.ris)
        ris.append(from_tensor(t));
    py::list pos;
    for (const auto& p : real.ue_positions)
        pos.append(py::make_tuple(p.x, p.y, p.z));
    py::dict d;
    d["direct"] = real.direct;
    d["ris"] = ris;
    d["ue_positions"] = pos;
    return d;
}

ChannelRealization realization_from(const std::vector<CMatrix>& direct, const std::vector<CArray>& ris)
{
    ChannelRealization real;
    real.direct = direct;
    real.ris = to_tensors(ris);
    real.validate();
    return real;
}

py::dict result_dict(const OptimizerResult& r)
{
    py::dict d;
    d["beamformers"] = r.bfs.per_ue;
    d["phi"] = r.phi;
    d["rate_trace"] = r.rate_trace;
    d["wmse_trace"] = r.wmse_trace;
    d["outer_iterations"] = r.outer_iterations;
    d["rejected_steps"] = r.rejected_steps;
    d["converged"] = r.converged;
    d["sum_rate_bpcu"] = r.final_rate();
    return d;
}

OptimizerCfg optimizer_cfg(int max_outer, double tol_bpcu, const CVector& phi_init)
{
    OptimizerCfg c;
    c.max_outer = max_outer;
    c.tol_bpcu = tol_bpcu;
    c.phi_init = phi_init;
    return c;
}

} // namespace

PYBIND11_MODULE(_risopt, m)
{
    m.doc() = "Joint WMMSE beamforming and RIS phase-shift optimisation.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // Tensor algebra
    m.def("mode_product", [](const CArray& t, const CVector& v, int mode) { return mode_product(to_tensor(t), v, mode); },
          py::arg("tensor"), py::arg("v"), py::arg("mode"), "Contract one axis of a 3-D tensor with a vector.");
    m.def("hadamard2", [](const CMatrix& a, const CMatrix& b) { return from_tensor(hadamard2(a, b)); },
          py::arg("a"), py::arg("b"));
    m.def("logdet_hermitian_psd", &logdet_hermitian_psd, py::arg("a"));
    m.def("determinant_factors", &determinant_factors, py::arg("a"), py::arg("b"),
          "Factors (1 + a_m^T P_m a_m) whose product is det(I + A^T B A).");

    // Channel model
    m.def("upa_response",
          [](int horizontal, int vertical, double az, double el, double spacing) {
              return upa_response(ArrayGeometry{horizontal, vertical, spacing}, az, el);
          },
          py::arg("horizontal"), py::arg("vertical"), py::arg("az"), py::arg("el"), py::arg("spacing") = 0.5);
    m.def("scenario_defaults", []() { return scenario_to_text(ScenarioConfig{}); },
          "Default scenario as key = value text.");
    m.def("draw_realization",
          [](const py::object& cfg, std::uint64_t trial) { return realization_dict(draw_realization(scenario_from(cfg), trial)); },
          py::arg("config") = py::none(), py::arg("trial") = 0,
          "Draw direct channels (M x N) and RIS tensors (M x L x N) for one trial.");

    // Beamforming and rates
    m.def("sum_rate",
          [](const std::vector<CMatrix>& h, const std::vector<CMatrix>& b, double noise) {
              return sum_rate(h, to_bfs(b, 1.0), noise);
          },
          py::arg("channels"), py::arg("beamformers"), py::arg("noise_var"), "Sum-rate in nats.");
    m.def("initial_beamformers",
          [](const std::vector<CMatrix>& h, int streams, double p) { return initial_beamformers(h, streams, p).per_ue; },
          py::arg("channels"), py::arg("streams"), py::arg("tx_power"));
    m.def("wmmse_step",
          [](const std::vector<CMatrix>& h, const std::vector<CMatrix>& b, double p, double noise) {
              return wmmse_step(h, to_bfs(b, p), noise).per_ue;
          },
          py::arg("channels"), py::arg("beamformers"), py::arg("tx_power"), py::arg("noise_var"));
    m.def("sum_rate_semiquadratic",
          [](const std::vector<CArray>& concat, const std::vector<CMatrix>& b, const CVector& psi, double noise) {
              const auto t = to_tensors(concat);
              const auto bfs = to_bfs(b, 1.0);
              double s = 0.0;
              for (int k = 0; k < bfs.num_ues(); ++k)
                  s += user_rate_semiquadratic(t[static_cast<std::size_t>(k)], k, bfs, psi, noise);
              return s;
          },
          py::arg("concat"), py::arg("beamformers"), py::arg("psi"), py::arg("noise_var"));
    m.def("sum_rate_gradient",
          [](const std::vector<CArray>& concat, const std::vector<CMatrix>& b, const CVector& psi, double noise) {
              return sum_rate_gradient(to_tensors(concat), to_bfs(b, 1.0), psi, noise);
          },
          py::arg("concat"), py::arg("beamformers"), py::arg("psi"), py::arg("noise_var"),
          "Wirtinger gradient d(sum-rate)/d(psi) in nats.");
    m.def("waterfill",
          [](const RVector& gains, double p) {
              const auto w = waterfill(gains, p);
              return py::make_tuple(w.powers, w.water_level);
          },
          py::arg("gains"), py::arg("total_power"));

    // Optimizers
    m.def("optimizer_names", &optimizer_names);
    auto opt = [](OptimizerResult (*fn)(const ChannelRealization&, double, double, const OptimizerCfg&)) {
        return [fn](const std::vector<CMatrix>& direct, const std::vector<CArray>& ris, double p, double noise,
                    int max_outer, double tol, const CVector& phi_init) {
            return result_dict(fn(realization_from(direct, ris), p, noise, optimizer_cfg(max_outer, tol, phi_init)));
        };
    };
    const auto opt_args = std::make_tuple(py::arg("direct"), py::arg("ris"), py::arg("tx_power"), py::arg("noise_var"),
                                          py::arg("max_outer") = 300, py::arg("tol_bpcu") = 1e-6,
                                          py::arg("phi_init") = CVector());
    auto def_opt = [&](const char* name, auto fn) {
        std::apply([&](auto... a) { m.def(name, opt(fn), a...); }, opt_args);
    };
    def_opt("maxr_wmmse", &maxr_wmmse);
    def_opt("mine_wmmse", &mine_wmmse);
    def_opt("gd_svd", &gd_svd);
    def_opt("gd_wmmse", &gd_wmmse);

    m.def("run",
          [](const py::object& cfg, const std::string& optimizer, std::uint64_t trial) {
              const KeyValueMap map = config_from(cfg);
              ConfigReader r(map);
              const ScenarioConfig sc = read_scenario(r);
              const RunSettings settings = read_run_settings(r);
              r.reject_unknown();
              py::gil_scoped_release release;
              const auto real = draw_realization(sc, trial);
              auto res = run_optimizer(optimizer, real, sc, settings, trial);
              py::gil_scoped_acquire acquire;
              return result_dict(res);
          },
          py::arg("config") = py::none(), py::arg("optimizer") = "maxr_wmmse", py::arg("trial") = 0,
          "Draw one realization from a scenario config and run an optimizer on it.");

    m.def("run_sweep",
          [](const py::object& cfg, int threads) {
              const SweepSpec spec = read_sweep(config_from(cfg));
              SweepResult res;
              {
                  py::gil_scoped_release release;
                  res = run_sweep(spec, resolve_threads(threads));
              }
              std::ostringstream csv;
              write_csv(csv, spec, res.records);
              py::list aggregates;
              for (const auto& a : res.aggregates) {
                  py::dict d;
                  d["axis_value"] = a.axis_value;
                  d["optimizer"] = a.optimizer;
                  d["count"] = a.count;
                  d["mean"] = a.mean;
                  d["std_error"] = a.std_error;
                  aggregates.append(d);
              }
              return py::make_tuple(csv.str(), aggregates);
          },
          py::arg("spec"), py::arg("threads") = 0, "Run a sweep; returns (csv_text, aggregates).");

    m.def("gradient_check",
          [](int M, int N, int K, int L, std::uint64_t seed) {
              const auto gc = gradient_check(random_instance(M, N, K, L, seed));
              return py::make_tuple(gc.rel_error, gc.skipped);
          },
          py::arg("M"), py::arg("N"), py::arg("K"), py::arg("L"), py::arg("seed") = 1,
          "Relative L2 error of the analytic gradient against central differences.");
}
