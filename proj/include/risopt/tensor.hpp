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

#include <span>
#include <vector>

namespace risopt {

/// Dense complex 3-D tensor indexed (i, j, k) with extents (dim1, dim2, dim3).
///
/// Storage keeps each mode-2 slab t(:, j, :) contiguous and column-major, so
/// `slab(j)` is a zero-copy dim1 x dim3 view. The hot loops of the rate and
/// gradient code contract over the second axis and walk slabs in order.
class CTensor3 {
public:
    using Index = Eigen::Index;

    CTensor3() = default;
    CTensor3(Index dim1, Index dim2, Index dim3);

    Index dim1() const { return d1_; }
    Index dim2() const { return d2_; }
    Index dim3() const { return d3_; }
    /// Extent of axis `mode` in {1, 2, 3}.
    Index dim(int mode) const;
    Index size() const { return static_cast<Index>(data_.size()); }

    cplx& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
    const cplx& operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

    /// [[t(:, j, :)]] as a dim1 x dim3 view.
    Eigen::Map<CMatrix> slab(Index j);
    Eigen::Map<const CMatrix> slab(Index j) const;

    /// [[t(i, :, :)]], a dim2 x dim3 matrix.
    CMatrix row_section(Index i) const;
    /// [[t(:, :, k)]], a dim1 x dim2 matrix.
    CMatrix column_section(Index k) const;

    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    void set_zero();
    bool is_zero() const;
    double frobenius_norm() const;

private:
    std::size_t offset(Index i, Index j, Index k) const {
        return static_cast<std::size_t>((j * d3_ + k) * d1_ + i);
    }

    Index d1_ = 0;
    Index d2_ = 0;
    Index d3_ = 0;
    std::vector<cplx> data_;
};

/// Contract axis `mode` of `t` with vector `v`; the collapsed axis disappears.
/// mode 1 -> dim2 x dim3, mode 2 -> dim1 x dim3, mode 3 -> dim1 x dim2.
CMatrix mode_product(const CTensor3& t, const CVector& v, int mode);

/// t x_mode X: axis `mode` (extent X.rows()) is replaced by an axis of extent
/// X.cols(), result(.., c, ..) = sum_r t(.., r, ..) X(r, c).
CTensor3 mode_product(const CTensor3& t, const CMatrix& x, int mode);

/// Multi-dimensional Hadamard product along the shared axis: a (M x N) and
/// b (N x L) give an M x N x L tensor whose n-th slab is a(:, n) b(n, :).
CTensor3 hadamard2(const CMatrix& a, const CMatrix& b);

/// Drop the single unit-extent axis. Throws ShapeError unless exactly one
/// axis has extent 1.
CMatrix shrink(const CTensor3& t);
/// Drop the given unit-extent axis (1, 2 or 3).
CMatrix shrink(const CTensor3& t, int axis);
/// Inverse of shrink: insert a unit axis at position `axis`.
CTensor3 expand(const CMatrix& m, int axis);

/// [front : t] along axis 2, i.e. a dim1 x (dim2 + 1) x dim3 tensor whose
/// first slab is `front`.
CTensor3 prepend_slab(const CMatrix& front, const CTensor3& t);

/// log det of a Hermitian positive (semi)definite matrix. Cholesky first,
/// eigen-decomposition with eigenvalues clamped at 1e-300 as the fallback.
/// Throws DomainError when the input is visibly non-Hermitian.
double logdet_hermitian_psd(const CMatrix& a);

/// Largest absolute entry of a - a^H.
double hermitian_defect(const CMatrix& a);

} // namespace risopt
