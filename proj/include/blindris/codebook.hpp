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

#ifndef BLINDRIS_CODEBOOK_HPP
#define BLINDRIS_CODEBOOK_HPP

#include "blindris/linalg.hpp"
#include "blindris/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace blindris::codebook {

using linalg::ComplexMatrix;
using Bits = std::vector<std::uint8_t>;

// Shared M x 2^m_bits codebook. The leading id_bits = ceil(log2 K) bits of a
// codeword index carry the user identity, so user k owns the contiguous
// index range [k * range_size(), (k + 1) * range_size()).
struct Codebook {
    ComplexMatrix matrix;
    std::size_t m_bits = 0;
    std::size_t id_bits = 0;
    std::size_t n_users = 0;

    std::size_t n_codewords() const { return std::size_t{1} << m_bits; }
    std::size_t data_bits() const { return m_bits - id_bits; }
    std::size_t range_size() const { return std::size_t{1} << data_bits(); }
    std::size_t codeword_len() const { return matrix.rows(); }
};

struct BlockMessage {
    std::size_t user = 0;
    std::size_t block = 0;
    Bits data_bits;
    Bits full_bits; // MSB first: ID bits, then data bits
    std::size_t codeword_index = 0;
};

struct EncodedBlock {
    BlockMessage message;
    ComplexMatrix codeword; // M x 1, column codeword_index of the codebook
};

struct DecodedIndex {
    std::size_t user = 0;
    Bits data_bits;
};

// i.i.d. CN(0, 1) entries. Throws ConfigError on invalid sizes.
Codebook gen_codebook(std::size_t m, std::size_t m_bits, std::size_t k_users, Rng& rng);

// Throws EncodingError if data_bits has the wrong length or holds a value
// other than 0/1, and InvalidUserError if user >= K.
EncodedBlock encode(const Codebook& book, std::size_t user, std::span<const std::uint8_t> data_bits,
                    std::size_t block = 0);

// Throws InvalidUserError when n falls outside every user's range
// (only possible for non-power-of-two K) or n >= N.
DecodedIndex decode_index(const Codebook& book, std::size_t n);

// Owner of codeword index n, or -1 if no user owns it.
long owner_of(const Codebook& book, std::size_t n);

Bits to_bits(std::size_t value, std::size_t width);
std::size_t from_bits(std::span<const std::uint8_t> bits);

} // namespace blindris::codebook

#endif
