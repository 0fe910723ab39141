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
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace blindris;
using linalg::ComplexMatrix;

namespace {

airlink::TransmissionScenario scenario(const SystemConfig& cfg, Rng& rng) {
    const auto dict = channel::build_dictionaries(cfg);
    auto ch = channel::sample_channel(cfg, dict, rng);
    auto book = codebook::gen_codebook(cfg.codeword_len, cfg.bits_per_block, cfg.n_users, rng);
    auto sched = ris::random_schedule(cfg.n_ris_elements, cfg.n_blocks, rng);
    return airlink::make_scenario(cfg, std::move(book), std::move(ch), std::move(sched), rng);
}

double mean_sq(std::span<const ComplexMatrix> blocks) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& b : blocks) {
        s += linalg::frobenius_norm_sq(b);
        n += b.size();
    }
    return s / static_cast<double>(n);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("equivalent channel") {
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    const auto ch = channel::build_channel(dict, {{4, 2, cplx{1.0, 0.0}}},
                                           {{{9, cplx{0.5, 0.5}}}, {{1, 1.0}}, {{0, 1.0}}, {{3, 1.0}}});
    const std::vector<cplx> ones(32, 1.0);
    const auto g = airlink::equivalent_channel(ones, ch);
    REQUIRE(g.rows() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t n = 0; n < 4; ++n) {
            cplx colsum{};
            for (std::size_t r = 0; r < 32; ++r) colsum += ch.cascade[k](r, n);
            CHECK(std::abs(g(k, n) - colsum) < 1e-12);
        }
    }

    Rng rng(61);
    const auto rc = channel::sample_channel(cfg, dict, rng);
    const auto sched = ris::random_schedule(32, 30, rng);
    const auto a = ris::ris_operand(sched.psi, dict.f_ris);
    for (std::size_t j = 0; j < 30; ++j) {
        const auto gj = airlink::equivalent_channel(sched.psi.col(j), rc);
        const std::vector<std::size_t> row{j};
        const auto op = linalg::kron(linalg::conj(dict.f_bs), linalg::select_rows(a, row));
        for (std::size_t k = 0; k < 4; ++k) {
            const auto pred = linalg::matmul(op, linalg::vec(rc.d_cascade[k]));
            const auto truth = linalg::transpose(linalg::select_rows(gj, std::vector<std::size_t>{k}));
            CHECK(linalg::relative_error(pred, truth) < 1e-10);
        }
    }

    auto zero = rc;
    for (auto& h : zero.cascade) h = ComplexMatrix(32, 4);
    CHECK(testutil::max_abs(airlink::equivalent_channel(sched.psi.col(0), zero)) == 0.0);
}

TEST_CASE("noise variance") {
    Rng rng(62);
    const std::vector<ComplexMatrix> sig{testutil::random_matrix(10, 4, rng), testutil::random_matrix(10, 4, rng)};
    CHECK(airlink::noise_variance_for_snr(sig, 0.0) == doctest::Approx(mean_sq(sig)).epsilon(1e-14));
    CHECK(airlink::noise_variance_for_snr(sig, kInf) == 0.0);
    std::vector<ComplexMatrix> louder = sig;
    for (auto& b : louder) b *= std::sqrt(2.0);
    CHECK(airlink::noise_variance_for_snr(louder, 7.0) ==
          doctest::Approx(2.0 * airlink::noise_variance_for_snr(sig, 7.0)).epsilon(1e-13));
    const std::vector<ComplexMatrix> silent{ComplexMatrix(3, 3)};
    CHECK_THROWS_AS(airlink::noise_variance_for_snr(silent, 10.0), DegenerateInputError);
}

TEST_CASE("synthesize") {
    Rng rng(63);
    SystemConfig cfg;
    for (int t = 0; t < 10; ++t) {
        const auto sc = scenario(cfg, rng);
        Rng nr(7);
        const auto rx = airlink::synthesize(sc, kInf, nr);
        REQUIRE(rx.y.size() == 30);
        for (std::size_t j = 0; j < 30; ++j) {
            // independent construction: C Lambda(j)
            const auto lam = airlink::row_sparse_lambda(sc, j, rx.equivalent[j]);
            CHECK(linalg::relative_error(linalg::matmul(sc.book.matrix, lam), rx.y[j]) < 1e-12);
            CHECK(rx.y[j] == rx.noiseless[j]);
        }
        Rng nr2(7);
        CHECK(airlink::synthesize(sc, kInf, nr2).y == rx.y);
    }

    SystemConfig one = cfg;
    one.n_users = 1;
    const auto sc1 = scenario(one, rng);
    Rng nr(1);
    const auto rx1 = airlink::synthesize(sc1, kInf, nr);
    const auto& m = sc1.message(0, 3);
    const auto expect = linalg::matmul(linalg::select_columns(sc1.book.matrix, std::vector<std::size_t>{m.codeword_index}),
                                       rx1.equivalent[3]);
    CHECK(linalg::relative_error(expect, rx1.y[3]) < 1e-13);
}

TEST_CASE("measured SNR matches the request") {
    Rng rng(64);
    SystemConfig cfg;
    cfg.n_blocks = 60;
    for (double snr : {0.0, 10.0, 20.0}) {
        double sig = 0.0, noise = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto sc = scenario(cfg, rng);
            const auto rx = airlink::synthesize(sc, snr, rng);
            sig += mean_sq(rx.noiseless);
            std::vector<ComplexMatrix> diff;
            for (std::size_t j = 0; j < rx.y.size(); ++j) diff.push_back(rx.y[j] - rx.noiseless[j]);
            noise += mean_sq(diff);
        }
        CHECK(std::abs(10.0 * std::log10(sig / noise) - snr) < 0.2);
    }
}

TEST_CASE("scenario validation") {
    Rng rng(65);
    SystemConfig cfg;
    auto sc = scenario(cfg, rng);
    CHECK_NOTHROW(sc.validate());
    sc.messages.pop_back();
    CHECK_THROWS_AS(sc.validate(), ConfigError);
}
