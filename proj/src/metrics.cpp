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

#include "blindris/metrics.hpp"

#include "blindris/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace blindris::metrics {

double to_db(double linear) {
    if (linear <= 0.0) {
        return kNmseFloorDb;
    }
    return std::max(kNmseFloorDb, 10.0 * std::log10(linear));
}

Nmse nmse(const ComplexMatrix& h_true, const ComplexMatrix& h_est) {
    const double ref = linalg::frobenius_norm_sq(h_true);
    if (ref == 0.0) {
        throw DegenerateInputError("nmse: true channel is zero");
    }
    const double lin = linalg::frobenius_norm_sq(h_true - h_est) / ref;
    return {lin, to_db(lin)};
}

double BerCounts::weighted_numerator() const {
    return static_cast<double>(m_bits * id_errors + data_errors);
}

double BerCounts::weighted_denominator() const {
    return static_cast<double>(user_blocks * (m_bits * id_bits + (m_bits - id_bits)));
}

double BerCounts::weighted() const {
    const double den = weighted_denominator();
    return den > 0.0 ? weighted_numerator() / den : 0.0;
}

double BerCounts::id_rate() const {
    const double den = static_cast<double>(user_blocks * id_bits);
    return den > 0.0 ? static_cast<double>(id_errors) / den : 0.0;
}

double BerCounts::data_rate() const {
    const double den = static_cast<double>(user_blocks * (m_bits - id_bits));
    return den > 0.0 ? static_cast<double>(data_errors) / den : 0.0;
}

double BerCounts::erasure_rate() const {
    return user_blocks > 0 ? static_cast<double>(erasures) / static_cast<double>(user_blocks) : 0.0;
}

BerCounts& BerCounts::operator+=(const BerCounts& o) {
    if (user_blocks == 0) {
        m_bits = o.m_bits;
        id_bits = o.id_bits;
    } else if (o.user_blocks > 0 && (o.m_bits != m_bits || o.id_bits != id_bits)) {
        throw AccountingError("BerCounts: cannot merge counts with different bit layouts");
    }
    user_blocks += o.user_blocks;
    erasures += o.erasures;
    id_errors += o.id_errors;
    data_errors += o.data_errors;
    return *this;
}

BerCounts weighted_ber(std::span<const codebook::BlockMessage> truth, std::span<const RecoveredIndex> recovered,
                       std::size_t m_bits, std::size_t id_bits) {
    if (id_bits > m_bits) {
        throw AccountingError("weighted_ber: more ID bits than bits per block");
    }
    std::map<std::pair<std::size_t, std::size_t>, const RecoveredIndex*> by_key;
    for (const auto& r : recovered) {
        if (!by_key.emplace(std::make_pair(r.user, r.block), &r).second) {
            throw AccountingError("weighted_ber: duplicate recovery for user " + std::to_string(r.user) + " block " +
                                  std::to_string(r.block));
        }
    }
    if (by_key.size() != truth.size()) {
        throw AccountingError("weighted_ber: recovered coverage does not match transmitted messages");
    }

    BerCounts c;
    c.m_bits = m_bits;
    c.id_bits = id_bits;
    for (const auto& msg : truth) {
        const auto it = by_key.find({msg.user, msg.block});
        if (it == by_key.end()) {
            throw AccountingError("weighted_ber: no recovery for user " + std::to_string(msg.user) + " block " +
                                  std::to_string(msg.block));
        }
        if (msg.full_bits.size() != m_bits) {
            throw AccountingError("weighted_ber: message bit length does not match m_bits");
        }
        ++c.user_blocks;
        const RecoveredIndex& r = *it->second;
        if (r.erased) {
            ++c.erasures;
            c.id_errors += id_bits;
            c.data_errors += m_bits - id_bits;
            continue;
        }
        const codebook::Bits got = codebook::to_bits(r.index, m_bits);
        for (std::size_t i = 0; i < m_bits; ++i) {
            if (got[i] != msg.full_bits[i]) {
                if (i < id_bits) {
                    ++c.id_errors;
                } else {
                    ++c.data_errors;
                }
            }
        }
    }
    return c;
}

double data_rate(const SystemConfig& cfg) {
    return static_cast<double>(cfg.n_users * (cfg.bits_per_block - cfg.id_bits())) /
           static_cast<double>(cfg.codeword_len);
}

} // namespace blindris::metrics
