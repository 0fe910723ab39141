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

#include "blindris/kernels.hpp"

#if defined(BLINDRIS_HAVE_AVX2_BUILD)
#include <immintrin.h>
#endif

#include <cstdlib>

namespace blindris::kernels::avx2 {

#if defined(BLINDRIS_HAVE_AVX2_BUILD)

// std::complex<double> is layout-compatible with double[2], so a __m256d
// holds two consecutive complex values as (re0, im0, re1, im1).

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

__attribute__((target("avx2,fma"))) cplx dotc(const cplx* a, const cplx* b, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    // acc_re lanes: ar*br, ai*bi        -> real part is the lane sum
    // acc_im lanes: ar*bi, ai*br        -> imag part is even lanes minus odd
    __m256d acc_re0 = _mm256_setzero_pd(), acc_re1 = _mm256_setzero_pd();
    __m256d acc_im0 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
        const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
        acc_re0 = _mm256_fmadd_pd(va0, vb0, acc_re0);
        acc_re1 = _mm256_fmadd_pd(va1, vb1, acc_re1);
        acc_im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), acc_im0);
        acc_im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), acc_im1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re0 = _mm256_fmadd_pd(va, vb, acc_re0);
        acc_im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im0);
    }
    const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
    const __m256d acc_im = _mm256_mul_pd(_mm256_add_pd(acc_im0, acc_im1), _mm256_setr_pd(1.0, -1.0, 1.0, -1.0));
    double re = hsum(acc_re);
    double im = hsum(acc_im);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

__attribute__((target("avx2,fma"))) void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const auto* px = reinterpret_cast<const double*>(x);
    auto* py = reinterpret_cast<double*>(y);
    const __m256d vr = _mm256_set1_pd(alpha.real());
    const __m256d vi = _mm256_setr_pd(-alpha.imag(), alpha.imag(), -alpha.imag(), alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        __m256d vy = _mm256_loadu_pd(py + 2 * i);
        vy = _mm256_fmadd_pd(vr, vx, vy);
        vy = _mm256_fmadd_pd(vi, _mm256_permute_pd(vx, 0b0101), vy);
        _mm256_storeu_pd(py + 2 * i, vy);
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + alpha.real() * xr - alpha.imag() * xi,
                y[i].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

__attribute__((target("avx2,fma"))) double norm2sq(const cplx* a, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(pa + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(pa + 2 * i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return s;
}

__attribute__((target("avx2,fma"))) void adjoint_gemv(const cplx* a, std::size_t lda, std::size_t ncols,
                                                     const cplx* b, std::size_t n, cplx* out) {
    const auto* pb = reinterpret_cast<const double*>(b);
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    const std::size_t n2 = n & ~std::size_t{1};
    std::size_t c = 0;
    // Four columns per pass so every load of b feeds eight independent FMA chains.
    for (; c + 4 <= ncols; c += 4) {
        const double* p0 = reinterpret_cast<const double*>(a + (c + 0) * lda);
        const double* p1 = reinterpret_cast<const double*>(a + (c + 1) * lda);
        const double* p2 = reinterpret_cast<const double*>(a + (c + 2) * lda);
        const double* p3 = reinterpret_cast<const double*>(a + (c + 3) * lda);
        __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd(), re2 = _mm256_setzero_pd(),
                re3 = _mm256_setzero_pd();
        __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd(), im2 = _mm256_setzero_pd(),
                im3 = _mm256_setzero_pd();
        for (std::size_t i = 0; i < n2; i += 2) {
            const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
            const __m256d vs = _mm256_permute_pd(vb, 0b0101);
            const __m256d v0 = _mm256_loadu_pd(p0 + 2 * i);
            const __m256d v1 = _mm256_loadu_pd(p1 + 2 * i);
            const __m256d v2 = _mm256_loadu_pd(p2 + 2 * i);
            const __m256d v3 = _mm256_loadu_pd(p3 + 2 * i);
            re0 = _mm256_fmadd_pd(v0, vb, re0);
            im0 = _mm256_fmadd_pd(v0, vs, im0);
            re1 = _mm256_fmadd_pd(v1, vb, re1);
            im1 = _mm256_fmadd_pd(v1, vs, im1);
            re2 = _mm256_fmadd_pd(v2, vb, re2);
            im2 = _mm256_fmadd_pd(v2, vs, im2);
            re3 = _mm256_fmadd_pd(v3, vb, re3);
            im3 = _mm256_fmadd_pd(v3, vs, im3);
        }
        const __m256d res[4] = {re0, re1, re2, re3};
        const __m256d ims[4] = {im0, im1, im2, im3};
        for (std::size_t k = 0; k < 4; ++k) {
            double re = hsum(res[k]);
            double im = hsum(_mm256_mul_pd(ims[k], sign));
            if (n2 < n) {
                const cplx x = a[(c + k) * lda + n2];
                const cplx y = b[n2];
                re += x.real() * y.real() + x.imag() * y.imag();
                im += x.real() * y.imag() - x.imag() * y.real();
            }
            out[c + k] = {re, im};
        }
    }
    for (; c < ncols; ++c) {
        out[c] = dotc(a + c * lda, b, n);
    }
}

#else

void adjoint_gemv(const cplx* a, std::size_t lda, std::size_t ncols, const cplx* b, std::size_t n, cplx* out) {
    scalar::adjoint_gemv(a, lda, ncols, b, n, out);
}

cplx dotc(const cplx* a, const cplx* b, std::size_t n) { return scalar::dotc(a, b, n); }
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
double norm2sq(const cplx* a, std::size_t n) { return scalar::norm2sq(a, n); }

#endif

} // namespace blindris::kernels::avx2
