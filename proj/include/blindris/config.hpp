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

#ifndef BLINDRIS_CONFIG_HPP
#define BLINDRIS_CONFIG_HPP

#include <cstddef>
#include <cstdint>

namespace blindris {

// Scenario dimensions shared by every module. Defaults are the desk-scale
// parameters used throughout the tests (4-antenna BS, 32-element RIS).
struct SystemConfig {
    std::size_t n_bs_antennas = 4;   // N_B
    std::size_t n_ris_elements = 32; // N_R
    std::size_t n_users = 4;         // K
    std::size_t grid_bs = 16;        // G_B
    std::size_t grid_ris = 64;       // G_R
    std::size_t paths_rb = 2;        // L_RB
    std::size_t paths_ru = 2;        // L_RU, identical for all users
    std::size_t codeword_len = 28;   // M
    std::size_t bits_per_block = 8;  // M_b, codebook holds 2^M_b codewords
    std::size_t n_blocks = 30;       // J
    double snr_db = 20.0;
    std::uint64_t seed = 1;

    // ceil(log2 K): number of leading ID bits in each block's bit vector.
    std::size_t id_bits() const;
    std::size_t data_bits() const { return bits_per_block - id_bits(); }
    std::size_t n_codewords() const { return std::size_t{1} << bits_per_block; }
    // L_RB * L_RU, the sparsity of each vectorized angular cascade.
    std::size_t cascade_sparsity() const { return paths_rb * paths_ru; }

    // Throws ConfigError naming the first violated constraint.
    void validate() const;
};

inline constexpr std::size_t kMaxBitsPerBlock = 20;

std::size_t ceil_log2(std::size_t k);

} // namespace blindris

#endif
