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

#ifndef BLINDRIS_KERNELS_HPP
#define BLINDRIS_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string_view>

// Complex double inner loops used by every dense product in the library.
// Each kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant. The variant is picked once at startup from CPUID; it can be
// overridden with set_backend() or the BLINDRIS_KERNELS environment variable
// ("scalar" or "avx2").
//
// The scalar and SIMD variants sum in a different order, so results agree
// to rounding, not bit-for-bit. Determinism guarantees hold per backend.

namespace blindris::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

// sum_i conj(a[i]) * b[i]
using DotcFn = cplx (*)(const cplx* a, const cplx* b, std::size_t n);
// y[i] += alpha * x[i]
using AxpyFn = void (*)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
// sum_i |a[i]|^2
using Norm2SqFn = double (*)(const cplx* a, std::size_t n);
// out[c] = sum_i conj(a[c * lda + i]) * b[i] for c < ncols: the product A^H b
// with A column-major (n rows, leading dimension lda).
using AdjointGemvFn = void (*)(const cplx* a, std::size_t lda, std::size_t ncols, const cplx* b, std::size_t n,
                               cplx* out);

struct KernelTable {
    DotcFn dotc;
    AxpyFn axpy;
    Norm2SqFn norm2sq;
    AdjointGemvFn adjoint_gemv;
};

namespace scalar {
cplx dotc(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2sq(const cplx* a, std::size_t n);
void adjoint_gemv(const cplx* a, std::size_t lda, std::size_t ncols, const cplx* b, std::size_t n, cplx* out);
} // namespace scalar

namespace avx2 {
// Only callable when avx2_available() is true.
cplx dotc(const cplx* a, const cplx* b, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
double norm2sq(const cplx* a, std::size_t n);
void adjoint_gemv(const cplx* a, std::size_t lda, std::size_t ncols, const cplx* b, std::size_t n, cplx* out);
} // namespace avx2

bool avx2_available();

Backend active_backend();
std::string_view backend_name(Backend b);

// Throws blindris::ConfigError if the requested backend is not supported on
// this CPU or was not compiled in.
void set_backend(Backend b);

const KernelTable& table();

inline cplx dotc(const cplx* a, const cplx* b, std::size_t n) { return table().dotc(a, b, n); }
inline void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) { table().axpy(alpha, x, y, n); }
inline double norm2sq(const cplx* a, std::size_t n) { return table().norm2sq(a, n); }
inline void adjoint_gemv(const cplx* a, std::size_t lda, std::size_t ncols, const cplx* b, std::size_t n, cplx* out) {
    table().adjoint_gemv(a, lda, ncols, b, n, out);
}

} // namespace blindris::kernels

#endif
