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

// Reference computations used by the tests. Everything here is written from
// the defining formulas with plain loops and dense LU factorisations, and
// shares no code with the library beyond the tensor accessor and types.

#include "risopt/tensor.hpp"
#include "risopt/wmmse.hpp"

#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using risopt::CMatrix;
using risopt::CTensor3;
using risopt::CVector;
using risopt::cplx;
using Index = Eigen::Index;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cplx cn(double var = 1.0)
    {
        std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
        return {n(eng_), n(eng_)};
    }
    CMatrix matrix(Index r, Index c, double var = 1.0)
    {
        CMatrix m(r, c);
        for (Index j = 0; j < c; ++j)
            for (Index i = 0; i < r; ++i)
                m(i, j) = cn(var);
        return m;
    }
    CVector vector(Index n, double var = 1.0) { return matrix(n, 1, var).col(0); }
    CVector phases(Index n)
    {
        CVector v(n);
        for (Index i = 0; i < n; ++i)
            v(i) = std::polar(1.0, uniform(-M_PI, M_PI));
        return v;
    }
    CTensor3 tensor(Index a, Index b, Index c, double var = 1.0)
    {
        CTensor3 t(a, b, c);
        for (Index i = 0; i < a; ++i)
            for (Index j = 0; j < b; ++j)
                for (Index k = 0; k < c; ++k)
                    t(i, j, k) = cn(var);
        return t;
    }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline CMatrix contract_vector(const CTensor3& t, const CVector& v, int mode)
{
    const Index d1 = t.dim1(), d2 = t.dim2(), d3 = t.dim3();
    CMatrix out;
    if (mode == 1)
        out = CMatrix::Zero(d2, d3);
    else if (mode == 2)
        out = CMatrix::Zero(d1, d3);
    else
        out = CMatrix::Zero(d1, d2);
    for (Index i = 0; i < d1; ++i)
        for (Index j = 0; j < d2; ++j)
            for (Index k = 0; k < d3; ++k) {
                if (mode == 1)
                    out(j, k) += t(i, j, k) * v(i);
                else if (mode == 2)
                    out(i, k) += t(i, j, k) * v(j);
                else
                    out(i, j) += t(i, j, k) * v(k);
            }
    return out;
}

inline CTensor3 contract_matrix(const CTensor3& t, const CMatrix& x, int mode)
{
    Index e[3] = {t.dim1(), t.dim2(), t.dim3()};
    e[mode - 1] = x.cols();
    CTensor3 out(e[0], e[1], e[2]);
    out.set_zero();
    for (Index i = 0; i < t.dim1(); ++i)
        for (Index j = 0; j < t.dim2(); ++j)
            for (Index k = 0; k < t.dim3(); ++k)
                for (Index c = 0; c < x.cols(); ++c) {
                    const Index r = mode == 1 ? i : mode == 2 ? j : k;
                    Index o[3] = {i, j, k};
                    o[mode - 1] = c;
                    out(o[0], o[1], o[2]) += t(i, j, k) * x(r, c);
                }
    return out;
}

inline cplx det(const CMatrix& a)
{
    return a.rows() == 0 ? cplx(1.0) : Eigen::FullPivLU<CMatrix>(a).determinant();
}

inline double logdet(const CMatrix& a)
{
    return std::log(std::abs(det(a)));
}

inline CMatrix inverse(const CMatrix& a)
{
    return Eigen::FullPivLU<CMatrix>(a).inverse();
}

/// Planar-array steering vector, element (h, v) at index h * vertical + v.
inline CVector steering(int horizontal, int vertical, double spacing, double az, double el)
{
    CVector a(horizontal * vertical);
    for (int h = 0; h < horizontal; ++h)
        for (int v = 0; v < vertical; ++v)
            a(h * vertical + v) =
                std::polar(1.0, 2.0 * M_PI * spacing * (h * std::cos(az) * std::sin(el) + v * std::cos(el)));
    return a;
}

/// H_d + sum_l phi_l H_R(:, l, :).
inline CMatrix effective_channel(const CMatrix& direct, const CTensor3& ris, const CVector& phi)
{
    CMatrix h = direct;
    for (Index i = 0; i < ris.dim1(); ++i)
        for (Index l = 0; l < ris.dim2(); ++l)
            for (Index n = 0; n < ris.dim3(); ++n)
                h(i, n) += ris(i, l, n) * phi(l);
    return h;
}

/// y_k = H_k^H x with x = sum_i B_i s_i. Received covariance minus the
/// interference-plus-noise covariance, as a log-det ratio.
inline double rate_logdet_ratio(const std::vector<CMatrix>& h, const std::vector<CMatrix>& b, int k, double s2)
{
    const Index N = h[static_cast<std::size_t>(k)].cols();
    CMatrix all = s2 * CMatrix::Identity(N, N);
    CMatrix others = all;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const CMatrix g = h[static_cast<std::size_t>(k)].adjoint() * b[i];
        all += g * g.adjoint();
        if (static_cast<int>(i) != k)
            others += g * g.adjoint();
    }
    return logdet(all) - logdet(others);
}

/// MMSE error covariance E = I - G^H (sum G G^H + s2 I)^-1 G for G = H^H B_k;
/// the rate is -log det E.
inline double rate_from_mse(const std::vector<CMatrix>& h, const std::vector<CMatrix>& b, int k, double s2)
{
    const auto uk = static_cast<std::size_t>(k);
    const Index N = h[uk].cols();
    CMatrix cov = s2 * CMatrix::Identity(N, N);
    for (const auto& bi : b)
        cov += h[uk].adjoint() * bi * bi.adjoint() * h[uk];
    const CMatrix g = h[uk].adjoint() * b[uk];
    const CMatrix e = CMatrix::Identity(g.cols(), g.cols()) - g.adjoint() * inverse(cov) * g;
    return -logdet(e);
}

/// E[(A y - s)(A y - s)^H] written as desired-error plus interference plus noise.
inline CMatrix mse(const CMatrix& h, const std::vector<CMatrix>& b, int k, const CMatrix& a, double s2)
{
    const Index N = a.rows();
    const CMatrix own = a * h.adjoint() * b[static_cast<std::size_t>(k)] - CMatrix::Identity(N, N);
    CMatrix e = own * own.adjoint() + s2 * a * a.adjoint();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (static_cast<int>(i) == k)
            continue;
        const CMatrix x = a * h.adjoint() * b[i];
        e += x * x.adjoint();
    }
    return e;
}

/// Wirtinger gradient d f / d z of a real function by central differences:
/// 0.5 (df/dx - j df/dy).
inline CVector fd_wirtinger(const std::function<double(const CVector&)>& f, const CVector& z, double h = 1e-6)
{
    CVector g(z.size());
    for (Index l = 0; l < z.size(); ++l) {
        CVector p = z, m = z;
        p(l) += h;
        m(l) -= h;
        const double dx = (f(p) - f(m)) / (2.0 * h);
        p = z;
        m = z;
        p(l) += cplx(0.0, h);
        m(l) -= cplx(0.0, h);
        const double dy = (f(p) - f(m)) / (2.0 * h);
        g(l) = 0.5 * cplx(dx, -dy);
    }
    return g;
}

/// Water-filling by bisection on the water level.
inline std::vector<double> waterfill_bisection(const std::vector<double>& gains, double total)
{
    double lo = 0.0, hi = total;
    for (double g : gains)
        if (g > 0.0)
            hi = std::max(hi, total + 1.0 / g);
    auto used = [&](double mu) {
        double s = 0.0;
        for (double g : gains)
            if (g > 0.0)
                s += std::max(0.0, mu - 1.0 / g);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (used(mid) > total ? hi : lo) = mid;
    }
    std::vector<double> p;
    for (double g : gains)
        p.push_back(g > 0.0 ? std::max(0.0, 0.5 * (lo + hi) - 1.0 / g) : 0.0);
    return p;
}

inline double relative_error(const CMatrix& a, const CMatrix& b)
{
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

} // namespace oracle
