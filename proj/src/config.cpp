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

#include "blindris/config.hpp"

#include "blindris/errors.hpp"

#include <string>

namespace blindris {

std::size_t ceil_log2(std::size_t k) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < k) {
        ++bits;
    }
    return bits;
}

std::size_t SystemConfig::id_bits() const { return ceil_log2(n_users); }

void SystemConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid system config: " + what); };
    if (n_bs_antennas == 0 || n_ris_elements == 0 || n_users == 0 || grid_bs == 0 || grid_ris == 0 ||
        paths_rb == 0 || paths_ru == 0 || codeword_len == 0 || bits_per_block == 0 || n_blocks == 0) {
        fail("all dimensions must be positive");
    }
    if (bits_per_block > kMaxBitsPerBlock) {
        fail("bits_per_block above " + std::to_string(kMaxBitsPerBlock));
    }
    if (id_bits() >= bits_per_block) {
        fail("ceil(log2 K) = " + std::to_string(id_bits()) + " must be below bits_per_block = " +
             std::to_string(bits_per_block));
    }
    if (n_users > codeword_len) {
        fail("n_users must not exceed codeword_len");
    }
    if (grid_bs < n_bs_antennas) {
        fail("grid_bs must be >= n_bs_antennas");
    }
    if (grid_ris < n_ris_elements) {
        fail("grid_ris must be >= n_ris_elements");
    }
    if (paths_rb > grid_ris * grid_bs) {
        fail("paths_rb exceeds the number of RIS-BS grid pairs");
    }
    if (paths_ru > grid_ris) {
        fail("paths_ru exceeds grid_ris");
    }
    if (cascade_sparsity() > n_blocks * n_bs_antennas) {
        fail("paths_rb*paths_ru exceeds n_blocks*n_bs_antennas measurements");
    }
}

} // namespace blindris
