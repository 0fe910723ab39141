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

#ifndef BLINDRIS_TEST_UTIL_HPP
#define BLINDRIS_TEST_UTIL_HPP

#include "blindris/linalg.hpp"
#include "blindris/random.hpp"

#include <complex>

namespace testutil {

using blindris::cplx;
using blindris::linalg::ComplexMatrix;

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, blindris::Rng& rng) {
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = blindris::complex_gaussian(rng, 1.0);
    }
    return m;
}

inline double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        v = std::max(v, std::abs(m[i]));
    }
    return v;
}

} // namespace testutil

#endif
