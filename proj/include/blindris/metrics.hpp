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

#ifndef BLINDRIS_METRICS_HPP
#define BLINDRIS_METRICS_HPP

#include "blindris/codebook.hpp"
#include "blindris/config.hpp"
#include "blindris/linalg.hpp"

#include <span>
#include <vector>

namespace blindris::metrics {

using linalg::ComplexMatrix;

// dB values are clamped at this floor so an exact estimate stays printable.
inline constexpr double kNmseFloorDb = -150.0;

struct Nmse {
    double linear = 0.0;
    double db = 0.0;
};

double to_db(double linear);

// ||H - H_hat||_F^2 / ||H||_F^2. Throws DegenerateInputError for H = 0.
Nmse nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est);

// What the receiver decided for one (user, block).
struct RecoveredIndex {
    std::size_t user = 0;
    std::size_t block = 0;
    bool erased = true;
    std::size_t index = 0;
};

struct BerCounts {
    std::size_t m_bits = 0;
    std::size_t id_bits = 0;
    std::size_t user_blocks = 0;
    std::size_t erasures = 0;
    std::size_t id_errors = 0;
    std::size_t data_errors = 0;

    // sum(M_b * e_id + e_dat) / sum(M_b * M_K + (M_b - M_K))
    double weighted_numerator() const;
    double weighted_denominator() const;
    double weighted() const;
    double id_rate() const;
    double data_rate() const;
    double erasure_rate() const;

    BerCounts& operator+=(const BerCounts& o);
};

// Compares each recovered index with the transmitted bits. An erased
// (user, block) counts as M_K ID-bit errors plus M_b - M_K data-bit errors.
// Throws AccountingError unless recovered covers exactly the same
// (user, block) pairs as truth.
BerCounts weighted_ber(std::span<const codebook::BlockMessage> truth, std::span<const RecoveredIndex> recovered,
                       std::size_t m_bits, std::size_t id_bits);

// K * (M_b - ceil(log2 K)) / M bits per channel use.
double data_rate(const SystemConfig& cfg);

} // namespace blindris::metrics

#endif
