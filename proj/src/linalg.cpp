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

#include "blindris/linalg.hpp"

#include "blindris/errors.hpp"
#include "blindris/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blindris::linalg {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> col_major)
    : rows_(rows), cols_(cols), data_(std::move(col_major)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: entry count " + std::to_string(data_.size()) + " != " +
                             std::to_string(rows_) + "*" + std::to_string(cols_));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
    return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionError("from_rows: ragged rows");
        }
        std::size_t j = 0;
        for (const auto& v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator+=");
    kernels::axpy(1.0, o.data(), data(), size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_shape(*this, o, "operator-=");
    kernels::axpy(-1.0, o.data(), data(), size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) {
        v *= s;
    }
    return *this;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.rows()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        cplx* dst = out.col(j).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx s = b(k, j);
            if (s != cplx{0.0, 0.0}) {
                kernels::axpy(s, a.col(k).data(), dst, a.rows());
            }
        }
    }
    return out;
}

ComplexMatrix adjoint_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("adjoint_matmul: row counts " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    }
    ComplexMatrix out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        kernels::adjoint_gemv(a.data(), a.rows(), a.cols(), b.col(j).data(), a.rows(), out.col(j).data());
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t c = 0; c < a.cols(); ++c) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
            out(c, r) = a(r, c);
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t c = 0; c < a.cols(); ++c) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return out;
}

ComplexMatrix conj(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::conj(out[i]);
    }
    return out;
}

ComplexMatrix diag(std::span<const cplx> d) {
    ComplexMatrix out(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        out(i, i) = d[i];
    }
    return out;
}

double frobenius_norm_sq(const ComplexMatrix& a) { return kernels::norm2sq(a.data(), a.size()); }

double frobenius_norm(const ComplexMatrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double relative_error(const ComplexMatrix& a, const ComplexMatrix& b) {
    const double diff = frobenius_norm(a - b);
    const double ref = frobenius_norm(b);
    return ref > 0.0 ? diff / ref : diff;
}

ComplexMatrix select_columns(const ComplexMatrix& a, std::span<const std::size_t> cols) {
    ComplexMatrix out(a.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= a.cols()) {
            throw DimensionError("select_columns: column index out of range");
        }
        std::copy_n(a.col(cols[j]).data(), a.rows(), out.col(j).data());
    }
    return out;
}

ComplexMatrix select_rows(const ComplexMatrix& a, std::span<const std::size_t> rows) {
    ComplexMatrix out(rows.size(), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= a.rows()) {
            throw DimensionError("select_rows: row index out of range");
        }
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out(i, c) = a(rows[i], c);
        }
    }
    return out;
}

ComplexMatrix vstack(std::span<const ComplexMatrix> blocks) {
    if (blocks.empty()) {
        return {};
    }
    const std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) {
            throw DimensionError("vstack: column count mismatch");
        }
        rows += b.rows();
    }
    ComplexMatrix out(rows, cols);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::copy_n(b.col(c).data(), b.rows(), out.col(c).data() + offset);
        }
        offset += b.rows();
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
            cplx* dst = out.col(ac * b.cols() + bc).data();
            for (std::size_t ar = 0; ar < a.rows(); ++ar) {
                const cplx s = a(ar, ac);
                const cplx* src = b.col(bc).data();
                for (std::size_t br = 0; br < b.rows(); ++br) {
                    dst[ar * b.rows() + br] = s * src[br];
                }
            }
        }
    }
    return out;
}

ComplexMatrix transposed_khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("transposed_khatri_rao: row counts " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    }
    ComplexMatrix out(a.rows(), a.cols() * b.cols());
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
            cplx* dst = out.col(ac * b.cols() + bc).data();
            for (std::size_t r = 0; r < a.rows(); ++r) {
                dst[r] = a(r, ac) * b(r, bc);
            }
        }
    }
    return out;
}

ComplexMatrix vec(const ComplexMatrix& a) { return ComplexMatrix(a.size(), 1, a.storage()); }

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) {
        throw DimensionError("unvec: length " + std::to_string(v.size()) + " != " + std::to_string(rows) + "*" +
                             std::to_string(cols));
    }
    return ComplexMatrix(rows, cols, v.storage());
}

ComplexMatrix lstsq(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.rows() != m) {
        throw DimensionError("lstsq: rhs has " + std::to_string(b.rows()) + " rows, expected " + std::to_string(m));
    }
    if (m < n) {
        throw DimensionError("lstsq: underdetermined system (" + std::to_string(m) + "x" + std::to_string(n) +
                                 ")");
    }
    ComplexMatrix r = a;
    ComplexMatrix qtb = b;
    std::vector<cplx> v(m);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t len = m - k;
        cplx* xk = r.col(k).data() + k;
        const double norm_x = std::sqrt(kernels::norm2sq(xk, len));
        if (norm_x == 0.0) {
            throw NumericalRankError("lstsq: zero pivot column");
        }
        const cplx phase = std::abs(xk[0]) > 0.0 ? xk[0] / std::abs(xk[0]) : cplx{1.0, 0.0};
        const cplx alpha = -phase * norm_x;
        std::copy_n(xk, len, v.begin());
        v[0] -= alpha;
        const double v_norm_sq = kernels::norm2sq(v.data(), len);

        auto reflect = [&](cplx* col) {
            const cplx w = kernels::dotc(v.data(), col, len);
            kernels::axpy(-2.0 * w / v_norm_sq, v.data(), col, len);
        };
        if (v_norm_sq > 0.0) {
            for (std::size_t c = k + 1; c < n; ++c) {
                reflect(r.col(c).data() + k);
            }
            for (std::size_t c = 0; c < qtb.cols(); ++c) {
                reflect(qtb.col(c).data() + k);
            }
        }
        xk[0] = alpha;
        std::fill(xk + 1, xk + len, cplx{0.0, 0.0});
    }

    double d_max = 0.0;
    double d_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        d_max = std::max(d_max, std::abs(r(k, k)));
        d_min = std::min(d_min, std::abs(r(k, k)));
    }
    if (n > 0 && (d_min == 0.0 || d_max / d_min > kRankConditionLimit)) {
        throw NumericalRankError("lstsq: matrix is numerically rank deficient");
    }

    ComplexMatrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = n; i-- > 0;) {
            cplx s = qtb(i, c);
            for (std::size_t j = i + 1; j < n; ++j) {
                s -= r(i, j) * x(j, c);
            }
            x(i, c) = s / r(i, i);
        }
    }
    return x;
}

} // namespace blindris::linalg
