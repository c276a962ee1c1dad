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

#include "risopt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace risopt {

namespace {

void check_mode(int mode)
{
    if (mode < 1 || mode > 3)
        throw DimensionError("tensor mode must be 1, 2 or 3, got " + std::to_string(mode));
}

std::string shape_str(const CTensor3& t)
{
    std::ostringstream os;
    os << t.dim1() << "x" << t.dim2() << "x" << t.dim3();
    return os.str();
}

} // namespace

CTensor3::CTensor3(Index dim1, Index dim2, Index dim3)
    : d1_(dim1), d2_(dim2), d3_(dim3),
      data_(static_cast<std::size_t>(dim1 * dim2 * dim3), cplx(0.0, 0.0))
{
    if (dim1 < 0 || dim2 < 0 || dim3 < 0)
        throw DimensionError("negative tensor extent");
}

CTensor3::Index CTensor3::dim(int mode) const
{
    check_mode(mode);
    return mode == 1 ? d1_ : (mode == 2 ? d2_ : d3_);
}

Eigen::Map<CMatrix> CTensor3::slab(Index j)
{
    return {data_.data() + j * d1_ * d3_, d1_, d3_};
}

Eigen::Map<const CMatrix> CTensor3::slab(Index j) const
{
    return {data_.data() + j * d1_ * d3_, d1_, d3_};
}

CMatrix CTensor3::row_section(Index i) const
{
    CMatrix out(d2_, d3_);
    for (Index j = 0; j < d2_; ++j)
        for (Index k = 0; k < d3_; ++k)
            out(j, k) = (*this)(i, j, k);
    return out;
}

CMatrix CTensor3::column_section(Index k) const
{
    CMatrix out(d1_, d2_);
    for (Index j = 0; j < d2_; ++j)
        out.col(j) = slab(j).col(k);
    return out;
}

void CTensor3::set_zero()
{
    std::fill(data_.begin(), data_.end(), cplx(0.0, 0.0));
}

bool CTensor3::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) { return z == cplx(0.0, 0.0); });
}

double CTensor3::frobenius_norm() const
{
    double s = 0.0;
    for (const auto& z : data_)
        s += std::norm(z);
    return std::sqrt(s);
}

CMatrix mode_product(const CTensor3& t, const CVector& v, int mode)
{
    check_mode(mode);
    if (v.size() != t.dim(mode))
        throw DimensionError("mode-" + std::to_string(mode) + " product: vector length " +
                             std::to_string(v.size()) + " does not match tensor " + shape_str(t));
    using Index = CTensor3::Index;
    switch (mode) {
    case 1: {
        CMatrix out(t.dim2(), t.dim3());
        for (Index j = 0; j < t.dim2(); ++j)
            out.row(j) = v.transpose() * t.slab(j);
        return out;
    }
    case 2: {
        CMatrix out = CMatrix::Zero(t.dim1(), t.dim3());
        for (Index j = 0; j < t.dim2(); ++j)
            out.noalias() += v(j) * t.slab(j);
        return out;
    }
    default: {
        CMatrix out(t.dim1(), t.dim2());
        for (Index j = 0; j < t.dim2(); ++j)
            out.col(j) = t.slab(j) * v;
        return out;
    }
    }
}

CTensor3 mode_product(const CTensor3& t, const CMatrix& x, int mode)
{
    check_mode(mode);
    if (x.rows() != t.dim(mode))
        throw DimensionError("mode-" + std::to_string(mode) + " product: matrix with " +
                             std::to_string(x.rows()) + " rows does not match tensor " + shape_str(t));
    using Index = CTensor3::Index;
    switch (mode) {
    case 1: {
        CTensor3 out(x.cols(), t.dim2(), t.dim3());
        for (Index j = 0; j < t.dim2(); ++j)
            out.slab(j).noalias() = x.transpose() * t.slab(j);
        return out;
    }
    case 2: {
        CTensor3 out(t.dim1(), x.cols(), t.dim3());
        for (Index c = 0; c < x.cols(); ++c)
            for (Index j = 0; j < t.dim2(); ++j)
                if (x(j, c) != cplx(0.0, 0.0))
                    out.slab(c).noalias() += x(j, c) * t.slab(j);
        return out;
    }
    default: {
        CTensor3 out(t.dim1(), t.dim2(), x.cols());
        for (Index j = 0; j < t.dim2(); ++j)
            out.slab(j).noalias() = t.slab(j) * x;
        return out;
    }
    }
}

CTensor3 hadamard2(const CMatrix& a, const CMatrix& b)
{
    if (a.cols() != b.rows())
        throw DimensionError("hadamard2: a has " + std::to_string(a.cols()) + " columns but b has " +
                             std::to_string(b.rows()) + " rows");
    CTensor3 out(a.rows(), a.cols(), b.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n)
        out.slab(n).noalias() = a.col(n) * b.row(n);
    return out;
}

CMatrix shrink(const CTensor3& t)
{
    const int units = int(t.dim1() == 1) + int(t.dim2() == 1) + int(t.dim3() == 1);
    if (units != 1)
        throw ShapeError("shrink: tensor " + shape_str(t) + " must have exactly one unit axis");
    if (t.dim1() == 1)
        return shrink(t, 1);
    if (t.dim2() == 1)
        return shrink(t, 2);
    return shrink(t, 3);
}

CMatrix shrink(const CTensor3& t, int axis)
{
    check_mode(axis);
    if (t.dim(axis) != 1)
        throw ShapeError("shrink: axis " + std::to_string(axis) + " of tensor " + shape_str(t) +
                         " is not a unit axis");
    switch (axis) {
    case 1:
        return t.row_section(0);
    case 2:
        return t.slab(0);
    default:
        return t.column_section(0);
    }
}

CTensor3 expand(const CMatrix& m, int axis)
{
    check_mode(axis);
    using Index = CTensor3::Index;
    switch (axis) {
    case 1: {
        CTensor3 out(1, m.rows(), m.cols());
        for (Index j = 0; j < m.rows(); ++j)
            for (Index k = 0; k < m.cols(); ++k)
                out(0, j, k) = m(j, k);
        return out;
    }
    case 2: {
        CTensor3 out(m.rows(), 1, m.cols());
        out.slab(0) = m;
        return out;
    }
    default: {
        CTensor3 out(m.rows(), m.cols(), 1);
        for (Index j = 0; j < m.cols(); ++j)
            out.slab(j).col(0) = m.col(j);
        return out;
    }
    }
}

CTensor3 prepend_slab(const CMatrix& front, const CTensor3& t)
{
    if (front.rows() != t.dim1() || front.cols() != t.dim3())
        throw DimensionError("prepend_slab: front slab does not match tensor " + shape_str(t));
    CTensor3 out(t.dim1(), t.dim2() + 1, t.dim3());
    out.slab(0) = front;
    std::copy(t.data().begin(), t.data().end(), out.data().begin() + front.size());
    return out;
}

double hermitian_defect(const CMatrix& a)
{
    if (a.rows() != a.cols())
        throw DimensionError("matrix is not square");
    if (a.size() == 0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double logdet_hermitian_psd(const CMatrix& a)
{
    if (a.rows() != a.cols())
        throw DimensionError("logdet: matrix is not square");
    if (a.size() == 0)
        return 0.0;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (hermitian_defect(a) > 1e-10 * scale)
        throw DomainError("logdet: matrix is not Hermitian");

    const CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() == Eigen::Success) {
        double s = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < h.rows(); ++i)
            s += std::log(l(i, i).real());
        return 2.0 * s;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        s += std::log(std::max(eig.eigenvalues()(i), 1e-300));
    return s;
}

} // namespace risopt
