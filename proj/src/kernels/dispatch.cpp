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

#include "blindris/errors.hpp"
#include "blindris/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace blindris::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::dotc, &scalar::axpy, &scalar::norm2sq, &scalar::adjoint_gemv};
constexpr KernelTable kAvx2Table{&avx2::dotc, &avx2::axpy, &avx2::norm2sq, &avx2::adjoint_gemv};

Backend detect() {
    if (const char* env = std::getenv("BLINDRIS_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") {
            return Backend::scalar;
        }
        if (want == "avx2" && avx2_available()) {
            return Backend::avx2;
        }
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

} // namespace

bool avx2_available() {
#if defined(BLINDRIS_HAVE_AVX2_BUILD)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available()) {
        throw ConfigError("avx2 kernels are not available on this machine");
    }
    current().store(b, std::memory_order_relaxed);
}

const KernelTable& table() {
    return active_backend() == Backend::avx2 ? kAvx2Table : kScalarTable;
}

} // namespace blindris::kernels
