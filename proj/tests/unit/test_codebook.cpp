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
#include "blindris/errors.hpp"

#include <doctest.h>

using namespace blindris;
using codebook::Bits;

TEST_CASE("codebook generation") {
    Rng a(41), b(41);
    const auto book = codebook::gen_codebook(28, 8, 4, a);
    CHECK(book.matrix.rows() == 28);
    CHECK(book.matrix.cols() == 256);
    CHECK(book.id_bits == 2);
    CHECK(book.range_size() == 64);
    CHECK(codebook::gen_codebook(28, 8, 4, b).matrix == book.matrix);

    double var = 0.0;
    cplx mean{};
    for (std::size_t i = 0; i < book.matrix.size(); ++i) {
        var += std::norm(book.matrix[i]);
        mean += book.matrix[i];
    }
    var /= static_cast<double>(book.matrix.size());
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(mean) / static_cast<double>(book.matrix.size()) < 0.05);

    CHECK_THROWS_AS(codebook::gen_codebook(28, 2, 8, a), ConfigError);
}

TEST_CASE("encode examples") {
    Rng rng(42);
    const auto book = codebook::gen_codebook(28, 8, 4, rng);
    const Bits zeros(6, 0), ones(6, 1);
    const auto e2 = codebook::encode(book, 2, zeros);
    CHECK(e2.message.codeword_index == 128);
    CHECK(e2.message.full_bits == Bits{1, 0, 0, 0, 0, 0, 0, 0});
    const auto e3 = codebook::encode(book, 3, ones);
    CHECK(e3.message.codeword_index == 255);
    for (std::size_t r = 0; r < 28; ++r) CHECK(e3.codeword(r, 0) == book.matrix(r, 255));
    CHECK_THROWS_AS(codebook::encode(book, 4, zeros), InvalidUserError);
    CHECK_THROWS_AS(codebook::encode(book, 0, Bits(5, 0)), EncodingError);
}

TEST_CASE("decode examples") {
    Rng rng(43);
    const auto book = codebook::gen_codebook(28, 8, 4, rng);
    const auto d = codebook::decode_index(book, 128);
    CHECK(d.user == 2);
    CHECK(d.data_bits == Bits(6, 0));
    const auto z = codebook::decode_index(book, 0);
    CHECK(z.user == 0);
    CHECK(z.data_bits == Bits(6, 0));
    CHECK_THROWS_AS(codebook::decode_index(book, 256), InvalidUserError);
}

TEST_CASE("exhaustive round trip, K = 4") {
    Rng rng(44);
    const auto book = codebook::gen_codebook(28, 8, 4, rng);
    for (std::size_t n = 0; n < 256; ++n) {
        const auto d = codebook::decode_index(book, n);
        const auto e = codebook::encode(book, d.user, d.data_bits);
        CHECK(e.message.codeword_index == n);
        CHECK(codebook::from_bits(e.message.full_bits) == n);
    }
}

TEST_CASE("non-power-of-two K leaves the top range unassigned") {
    Rng rng(45);
    const auto book = codebook::gen_codebook(28, 8, 3, rng);
    CHECK(book.id_bits == 2);
    for (std::size_t n = 0; n < 192; ++n) {
        CHECK(codebook::decode_index(book, n).user == n / 64);
        CHECK(codebook::owner_of(book, n) == static_cast<long>(n / 64));
    }
    for (std::size_t n = 192; n < 256; ++n) {
        CHECK_THROWS_AS(codebook::decode_index(book, n), InvalidUserError);
        CHECK(codebook::owner_of(book, n) == -1);
    }
}

TEST_CASE("K = 1 uses every index for data") {
    Rng rng(46);
    const auto book = codebook::gen_codebook(8, 4, 1, rng);
    CHECK(book.id_bits == 0);
    CHECK(codebook::encode(book, 0, Bits{1, 0, 1, 1}).message.codeword_index == 11);
}

TEST_CASE("bit helpers") {
    CHECK(codebook::to_bits(5, 4) == Bits{0, 1, 0, 1});
    CHECK(codebook::from_bits(Bits{1, 1, 0}) == 6);
}
