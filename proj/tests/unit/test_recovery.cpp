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

#include "blindris/airlink.hpp"
#include "blindris/errors.hpp"
#include "blindris/recovery.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

using namespace blindris;
using linalg::ComplexMatrix;
using testutil::random_matrix;

namespace {

struct Exhaustive {
    std::vector<std::size_t> best;
    bool unique = false;
};

// Smallest least-squares residual over all pairs of columns.
Exhaustive best_pair(const ComplexMatrix& c, const ComplexMatrix& y) {
    double first = std::numeric_limits<double>::infinity();
    double second = first;
    Exhaustive out;
    for (std::size_t i = 0; i < c.cols(); ++i) {
        for (std::size_t j = i + 1; j < c.cols(); ++j) {
            const std::vector<std::size_t> s{i, j};
            const auto sub = linalg::select_columns(c, s);
            const double res = linalg::frobenius_norm(y - linalg::matmul(sub, linalg::lstsq(sub, y)));
            if (res < first) {
                second = first;
                first = res;
                out.best = s;
            } else if (res < second) {
                second = res;
            }
        }
    }
    out.unique = second - first > 1e-9 * (1.0 + linalg::frobenius_norm(y));
    return out;
}

} // namespace

TEST_CASE("S-OMP single user") {
    Rng rng(71);
    const auto c = random_matrix(28, 256, rng);
    const auto row = random_matrix(1, 4, rng);
    const auto y = linalg::matmul(linalg::select_columns(c, std::vector<std::size_t>{77}), row);
    const auto r = recovery::somp(y, c, 1, 1);
    REQUIRE(r.support.size() == 1);
    CHECK(r.support[0] == 77);
    CHECK(r.residual_norms.back() < 1e-10 * r.residual_norms.front());
    CHECK(linalg::relative_error(r.rows, row) < 1e-12);
}

TEST_CASE("S-OMP agrees with exhaustive support search") {
    Rng rng(72);
    std::uniform_int_distribution<std::size_t> pick(0, 15);
    int compared = 0;
    for (int t = 0; t < 200; ++t) {
        const auto c = random_matrix(8, 16, rng);
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        const auto rows = random_matrix(2, 4, rng);
        const std::vector<std::size_t> truth{a, b};
        const auto y = linalg::matmul(linalg::select_columns(c, truth), rows);
        const auto ex = best_pair(c, y);
        if (!ex.unique) continue;
        ++compared;
        auto got = recovery::somp(y, c, 2, 2).support;
        std::sort(got.begin(), got.end());
        CHECK(got == ex.best);
    }
    CHECK(compared > 150);
}

TEST_CASE("S-OMP rows equal the equivalent channel rows") {
    Rng rng(73);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    auto sc = airlink::make_scenario(cfg, codebook::gen_codebook(28, 8, 4, rng), channel::sample_channel(cfg, dict, rng),
                                     ris::random_schedule(32, 30, rng), rng);
    const auto rx = airlink::synthesize(sc, std::numeric_limits<double>::infinity(), rng);
    for (std::size_t j = 0; j < 5; ++j) {
        const auto r = recovery::somp(rx.y[j], sc.book.matrix, 4, 4);
        for (std::size_t i = 0; i < r.support.size(); ++i) {
            std::size_t user = 4;
            for (std::size_t k = 0; k < 4; ++k)
                if (sc.message(k, j).codeword_index == r.support[i]) user = k;
            REQUIRE(user < 4);
            for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(r.rows(i, n) - rx.equivalent[j](user, n)) < 1e-10);
        }
    }
}

TEST_CASE("S-OMP argument checks") {
    Rng rng(74);
    const auto c = random_matrix(8, 16, rng);
    const auto y = random_matrix(8, 2, rng);
    CHECK_THROWS_AS(recovery::somp(y, c, 3, 2), ConfigError);
    CHECK_THROWS_AS(recovery::somp(y, c, 2, 9), ConfigError);
}

TEST_CASE("permutation resolution") {
    Rng rng(75);
    const auto book = codebook::gen_codebook(28, 8, 4, rng);
    const auto rows = random_matrix(4, 4, rng);

    const std::vector<std::size_t> s1{128, 5, 200, 70};
    const auto r1 = recovery::resolve_permutation(s1, rows, book);
    const std::size_t owner_row[4] = {1, 3, 0, 2}; // user -> raw position
    for (std::size_t k = 0; k < 4; ++k) {
        REQUIRE_FALSE(r1[k].erased);
        CHECK(r1[k].index == s1[owner_row[k]]);
        CHECK(linalg::max_abs_diff(r1[k].row, linalg::select_rows(rows, std::vector<std::size_t>{owner_row[k]})) == 0.0);
    }

    const std::vector<std::size_t> s2{3, 7, 130, 200};
    const auto r2 = recovery::resolve_permutation(s2, rows, book);
    CHECK(r2[0].erased);
    CHECK(r2[1].erased);
    CHECK_FALSE(r2[2].erased);
    CHECK(r2[2].index == 130);
    CHECK_FALSE(r2[3].erased);
    CHECK(r2[3].index == 200);

    // order of the raw support does not change the outcome
    const std::vector<std::size_t> s3{70, 200, 5, 128};
    std::vector<std::size_t> perm{3, 2, 1, 0};
    const auto rows3 = linalg::select_rows(rows, perm);
    const auto r3 = recovery::resolve_permutation(s3, rows3, book);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(r3[k].index == r1[k].index);
        CHECK(r3[k].row == r1[k].row);
    }

    const auto book3 = codebook::gen_codebook(28, 8, 3, rng);
    const std::vector<std::size_t> s4{10, 100, 250};
    const auto r4 = recovery::resolve_permutation(s4, random_matrix(3, 4, rng), book3);
    CHECK_FALSE(r4[0].erased);
    CHECK_FALSE(r4[1].erased);
    CHECK(r4[2].erased);
}

TEST_CASE("noiseless recovery with correct supports has no erasures") {
    Rng rng(76);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    std::size_t erasures = 0, user_blocks = 0, greedy_misses = 0;
    for (int t = 0; t < 100; ++t) {
        auto sc = airlink::make_scenario(cfg, codebook::gen_codebook(28, 8, 4, rng),
                                         channel::sample_channel(cfg, dict, rng), ris::random_schedule(32, 30, rng), rng);
        const auto rx = airlink::synthesize(sc, std::numeric_limits<double>::infinity(), rng);
        const auto out = recovery::recover_all_blocks(rx.y, sc.book, cfg);
        for (std::size_t j = 0; j < 30; ++j) {
            std::vector<std::size_t> sent, got = out.blocks[j].raw_support;
            for (std::size_t k = 0; k < 4; ++k) sent.push_back(sc.message(k, j).codeword_index);
            std::sort(sent.begin(), sent.end());
            std::sort(got.begin(), got.end());
            if (sent != got) {
                ++greedy_misses;
                continue;
            }
            for (std::size_t k = 0; k < 4; ++k) {
                ++user_blocks;
                if (out.erased[k][j]) {
                    ++erasures;
                    continue;
                }
                CHECK(out.blocks[j].users[k].index == sc.message(k, j).codeword_index);
                for (std::size_t n = 0; n < 4; ++n)
                    CHECK(std::abs(out.stacked[k](j * 4 + n, 0) - rx.equivalent[j](k, n)) < 1e-9);
            }
        }
    }
    CHECK(user_blocks + 4 * greedy_misses == 12000);
    CHECK(greedy_misses < 30);
    CHECK(erasures == 0);
}

TEST_CASE("erased user-blocks leave zeros in the stack") {
    Rng rng(77);
    SystemConfig cfg;
    cfg.n_blocks = 3;
    const auto book = codebook::gen_codebook(28, 8, 4, rng);
    std::vector<ComplexMatrix> y;
    for (int j = 0; j < 3; ++j) {
        // two codewords from user 0's range, none from the others
        const std::vector<std::size_t> cols{1, 2, 64 + 3, 128 + 4};
        y.push_back(linalg::matmul(linalg::select_columns(book.matrix, cols), random_matrix(4, 4, rng)));
    }
    const auto out = recovery::recover_all_blocks(y, book, cfg);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(out.erased[0][j]);
        CHECK(out.erased[3][j]);
        CHECK_FALSE(out.erased[1][j]);
    }
    CHECK(testutil::max_abs(out.stacked[0]) == 0.0);
}
