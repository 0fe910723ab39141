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

#include "blindris/channel.hpp"
#include "blindris/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace blindris;
using linalg::ComplexMatrix;

namespace {

SystemConfig default_cfg() { return SystemConfig{}; }

} // namespace

TEST_CASE("steering vectors") {
    const auto a = channel::steering_vector(8, 0.0);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(a(i, 0) - cplx{1.0 / std::sqrt(8.0), 0.0}) < 1e-15);
    }
    const auto b = channel::steering_vector(2, 1.0);
    CHECK(std::abs(b(0, 0) - cplx{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
    CHECK(std::abs(b(1, 0) - cplx{-1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
}

TEST_CASE("grid inner products follow the Dirichlet kernel") {
    const std::size_t n = 32, g = 64;
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    for (std::size_t i : {0u, 5u, 17u}) {
        for (std::size_t j : {0u, 1u, 33u, 63u}) {
            cplx ip{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r) {
                ip += std::conj(dict.f_ris(r, i)) * dict.f_ris(r, j);
            }
            // direct sum of exp(i*pi*r*(f_j - f_i)) / N
            const double df = 2.0 * (static_cast<double>(j) - static_cast<double>(i)) / static_cast<double>(g);
            cplx direct{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r) {
                direct += std::polar(1.0, std::numbers::pi * static_cast<double>(r) * df);
            }
            direct /= static_cast<double>(n);
            CHECK(std::abs(ip - direct) < 1e-12);
        }
    }
}

TEST_CASE("dictionaries") {
    const auto dict = channel::build_dictionaries(default_cfg());
    CHECK(dict.f_bs.rows() == 4);
    CHECK(dict.f_bs.cols() == 16);
    CHECK(dict.f_ris.rows() == 32);
    CHECK(dict.f_ris.cols() == 64);

    SystemConfig sq;
    sq.grid_bs = sq.n_bs_antennas;
    const auto d2 = channel::build_dictionaries(sq);
    const auto ffh = linalg::matmul(d2.f_bs, linalg::adjoint(d2.f_bs));
    CHECK(linalg::max_abs_diff(ffh, ComplexMatrix::identity(4)) < 1e-12);

    SystemConfig odd;
    odd.n_bs_antennas = 3;
    odd.grid_bs = 7;
    odd.n_ris_elements = 10;
    odd.grid_ris = 23;
    const auto d3 = channel::build_dictionaries(odd);
    for (const auto* m : {&d3.f_bs, &d3.f_ris}) {
        for (std::size_t c = 0; c < m->cols(); ++c) {
            double nrm = 0.0;
            for (auto v : m->col(c)) nrm += std::norm(v);
            CHECK(std::abs(nrm - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("single-path RIS-BS channel is a scaled outer product") {
    const auto cfg = default_cfg();
    const auto dict = channel::build_dictionaries(cfg);
    const auto ch = channel::build_channel(dict, {{5, 3, cplx{1.0, 0.0}}}, {{{0, cplx{1.0, 0.0}}}});
    const auto outer = linalg::matmul(channel::steering_vector(32, dict.ris_freqs[5]),
                                      linalg::adjoint(channel::steering_vector(4, dict.bs_freqs[3])));
    CHECK(linalg::max_abs_diff(ch.h_rb, cplx{std::sqrt(32.0 * 4.0)} * outer) < 1e-12);
}

TEST_CASE("Monte-Carlo channel power") {
    Rng rng(31);
    for (std::size_t l_rb : {1u, 2u}) {
        SystemConfig cfg;
        cfg.paths_rb = l_rb;
        const auto dict = channel::build_dictionaries(cfg);
        double acc = 0.0;
        const int draws = 10000;
        for (int t = 0; t < draws; ++t) {
            acc += linalg::frobenius_norm_sq(channel::sample_channel(cfg, dict, rng).h_rb);
        }
        const double expect = 32.0 * 4.0 / static_cast<double>(l_rb);
        CHECK(acc / draws == doctest::Approx(expect).epsilon(0.05));
    }
}

TEST_CASE("on-grid factorizations") {
    Rng rng(32);
    const auto cfg = default_cfg();
    const auto dict = channel::build_dictionaries(cfg);
    for (int t = 0; t < 50; ++t) {
        const auto ch = channel::sample_channel(cfg, dict, rng);
        const auto rb = linalg::matmul(linalg::matmul(dict.f_ris, ch.d_rb), linalg::adjoint(dict.f_bs));
        CHECK(linalg::frobenius_norm(ch.h_rb - rb) < 1e-12 * linalg::frobenius_norm(ch.h_rb));
        for (std::size_t k = 0; k < ch.n_users(); ++k) {
            ComplexMatrix direct = ch.h_rb;
            for (std::size_t c = 0; c < direct.cols(); ++c)
                for (std::size_t r = 0; r < direct.rows(); ++r) direct(r, c) *= std::conj(ch.h_ru[k](r, 0));
            const auto merged =
                linalg::matmul(linalg::matmul(dict.f_ris, ch.d_cascade[k]), linalg::adjoint(dict.f_bs));
            CHECK(linalg::relative_error(merged, direct) < 1e-10);
            CHECK(linalg::relative_error(ch.cascade[k], direct) < 1e-12);
        }
    }
}

TEST_CASE("cascade merge") {
    Rng rng(33);
    const auto cfg = default_cfg();
    const auto dict = channel::build_dictionaries(cfg);
    const auto ch = channel::sample_channel(cfg, dict, rng);

    ComplexMatrix e0(64, 1);
    e0(0, 0) = 1.0;
    const auto d = channel::merge_cascade(e0, ch.d_rb, 32);
    CHECK(linalg::max_abs_diff(d, cplx{1.0 / std::sqrt(32.0)} * ch.d_rb) < 1e-15);

    ComplexMatrix ru(64, 1);
    ru(10, 0) = 1.0;
    ComplexMatrix rb(64, 16);
    rb(3, 7) = 1.0;
    const auto m = channel::merge_cascade(ru, rb, 32);
    std::size_t nonzero_rows = 0;
    for (std::size_t r = 0; r < 64; ++r) {
        bool any = false;
        for (std::size_t c = 0; c < 16; ++c) any = any || m(r, c) != cplx{};
        if (any) {
            ++nonzero_rows;
            CHECK(r == (3 + 64 - 10) % 64);
        }
    }
    CHECK(nonzero_rows == 1);
}

TEST_CASE("realization round trip") {
    Rng rng(34);
    const auto cfg = default_cfg();
    const auto dict = channel::build_dictionaries(cfg);
    const auto ch = channel::sample_channel(cfg, dict, rng);
    std::stringstream ss;
    channel::write_realization(ss, ch);
    const auto back = channel::read_realization(ss);
    CHECK(back.h_rb == ch.h_rb);
    CHECK(back.d_rb == ch.d_rb);
    REQUIRE(back.n_users() == ch.n_users());
    for (std::size_t k = 0; k < ch.n_users(); ++k) {
        CHECK(back.cascade[k] == ch.cascade[k]);
        CHECK(back.d_cascade[k] == ch.d_cascade[k]);
    }
    std::stringstream bad("not-a-realization\n");
    CHECK_THROWS_AS(channel::read_realization(bad), Error);
}
