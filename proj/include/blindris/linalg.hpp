// SPDX-License-Identifier: Apache-2.0
//
// blindris: blind cascaded-channel estimation for RIS-assisted mmWave uplinks
// Copyright (C) 2026 The blindris authors
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

#ifndef BLINDRIS_LINALG_HPP
#define BLINDRIS_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace blindris {

using cplx = std::complex<double>;

namespace linalg {

// Dense complex matrix stored column-major: entry (r, c) lives at
// data()[c * rows() + r]. Column views are therefore contiguous, which is
// what the kernels in kernels.hpp want. A column vector is an n x 1 matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> col_major);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix column(std::span<const cplx> v);
    // Row-major literal, handy in tests: from_rows({{1, 2}, {3, 4}}).
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    std::span<cplx> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const cplx> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
    const std::vector<cplx>& storage() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    bool all_finite() const;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// a * b
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
// a^H * b without forming a^H
ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conj(const ComplexMatrix& a);
ComplexMatrix diag(std::span<const cplx> d);

double frobenius_norm_sq(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// ||a - b||_F / ||b||_F (absolute difference norm if b is zero)
double relative_error(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix select_columns(const ComplexMatrix& a, std::span<const std::size_t> cols);
ComplexMatrix select_rows(const ComplexMatrix& a, std::span<const std::size_t> rows);
ComplexMatrix vstack(std::span<const ComplexMatrix> blocks);

// (a.rows*b.rows) x (a.cols*b.cols), block (i, j) = a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Row-wise Kronecker product: row n of the result is kron(row n of a, row n
// of b). Throws DimensionError when the row counts differ.
ComplexMatrix transposed_khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-stacking vectorization and its inverse.
ComplexMatrix vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols);

// Least-squares solution of min ||a x - b||_F via Householder QR.
// Requires a.rows >= a.cols; throws NumericalRankError when the ratio of the
// extreme |R_ii| exceeds 1e12 (or a diagonal entry vanishes).
ComplexMatrix lstsq(const ComplexMatrix& a, const ComplexMatrix& b);

inline constexpr double kRankConditionLimit = 1e12;

} // namespace linalg
} // namespace blindris

#endif
