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

#include "blindris/codebook.hpp"

#include "blindris/config.hpp"
#include "blindris/errors.hpp"

#include <string>

namespace blindris::codebook {

Bits to_bits(std::size_t value, std::size_t width) {
    Bits out(width);
    for (std::size_t i = 0; i < width; ++i) {
        out[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1U);
    }
    return out;
}

std::size_t from_bits(std::span<const std::uint8_t> bits) {
    std::size_t v = 0;
    for (auto b : bits) {
        v = (v << 1) | (b & 1U);
    }
    return v;
}

Codebook gen_codebook(std::size_t m, std::size_t m_bits, std::size_t k_users, Rng& rng) {
    if (m == 0 || k_users == 0 || m_bits == 0 || m_bits > kMaxBitsPerBlock) {
        throw ConfigError("gen_codebook: invalid sizes");
    }
    const std::size_t id_bits = ceil_log2(k_users);
    if (id_bits > m_bits) {
        throw ConfigError("gen_codebook: " + std::to_string(k_users) + " users need " + std::to_string(id_bits) +
                          " ID bits but only " + std::to_string(m_bits) + " bits per block");
    }
    Codebook book;
    book.m_bits = m_bits;
    book.id_bits = id_bits;
    book.n_users = k_users;
    book.matrix = ComplexMatrix(m, std::size_t{1} << m_bits);
    for (std::size_t i = 0; i < book.matrix.size(); ++i) {
        book.matrix[i] = complex_gaussian(rng, 1.0);
    }
    return book;
}

EncodedBlock encode(const Codebook& book, std::size_t user, std::span<const std::uint8_t> data_bits,
                    std::size_t block) {
    if (user >= book.n_users) {
        throw InvalidUserError("encode: user " + std::to_string(user) + " >= K = " + std::to_string(book.n_users));
    }
    if (data_bits.size() != book.data_bits()) {
        throw EncodingError("encode: expected " + std::to_string(book.data_bits()) + " data bits, got " +
                            std::to_string(data_bits.size()));
    }
    for (auto b : data_bits) {
        if (b > 1) {
            throw EncodingError("encode: bit values must be 0 or 1");
        }
    }
    EncodedBlock out;
    out.message.user = user;
    out.message.block = block;
    out.message.data_bits.assign(data_bits.begin(), data_bits.end());
    out.message.full_bits = to_bits(user, book.id_bits);
    out.message.full_bits.insert(out.message.full_bits.end(), data_bits.begin(), data_bits.end());
    out.message.codeword_index = from_bits(out.message.full_bits);
    const auto col = book.matrix.col(out.message.codeword_index);
    out.codeword = ComplexMatrix::column(col);
    return out;
}

long owner_of(const Codebook& book, std::size_t n) {
    if (n >= book.n_codewords()) {
        return -1;
    }
    const std::size_t user = n / book.range_size();
    return user < book.n_users ? static_cast<long>(user) : -1;
}

DecodedIndex decode_index(const Codebook& book, std::size_t n) {
    if (n >= book.n_codewords()) {
        throw InvalidUserError("decode_index: index " + std::to_string(n) + " outside the codebook");
    }
    const long user = owner_of(book, n);
    if (user < 0) {
        throw InvalidUserError("decode_index: index " + std::to_string(n) + " lies in an unassigned range");
    }
    return {static_cast<std::size_t>(user), to_bits(n % book.range_size(), book.data_bits())};
}

} // namespace blindris::codebook
