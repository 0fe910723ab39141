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
#include "blindris/cascade.hpp"
#include "blindris/errors.hpp"
#include "blindris/metrics.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace blindris;
using linalg::ComplexMatrix;
using testutil::random_matrix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix stacked_truth(const channel::ChannelRealization& ch, const ris::PhaseSchedule& s, std::size_t k) {
    const std::size_t nb = ch.h_rb.cols();
    ComplexMatrix out(s.n_blocks() * nb, 1);
    for (std::size_t j = 0; j < s.n_blocks(); ++j) {
        const auto g = airlink::equivalent_channel(s.psi.col(j), ch);
        for (std::size_t n = 0; n < nb; ++n) out(j * nb + n, 0) = g(k, n);
    }
    return out;
}

} // namespace

TEST_CASE("sensing matrix shape and consistency") {
    Rng rng(81);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    const auto sched = ris::random_schedule(32, 30, rng);
    const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sched);
    CHECK(q.q.rows() == 120);
    CHECK(q.q.cols() == 1024);

    for (int t = 0; t < 10; ++t) {
        const auto ch = channel::sample_channel(cfg, dict, rng);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(linalg::relative_error(linalg::matmul(q.q, linalg::vec(ch.d_cascade[k])), stacked_truth(ch, sched, k)) <
                  1e-10);
        }
    }

    const auto kr = linalg::kron(linalg::conj(dict.f_bs), ris::ris_operand(sched.psi, dict.f_ris));
    CHECK(std::abs(ris::mutual_coherence(q.q) - ris::mutual_coherence(kr)) < 1e-12);
}

TEST_CASE("OMP trivial cases") {
    Rng rng(82);
    const auto q = random_matrix(6, 8, rng);
    const auto y = random_matrix(6, 1, rng);
    const auto r0 = cascade::omp(y, q, {0, {}});
    CHECK(testutil::max_abs(r0.coeffs) == 0.0);
    CHECK(r0.support.empty());
    CHECK(r0.residual_norms.back() == doctest::Approx(linalg::frobenius_norm(y)));

    const std::vector<bool> all_masked(6, true);
    CHECK_THROWS_AS(cascade::omp(y, q, {1, {}}, all_masked), InsufficientMeasurementsError);
}

TEST_CASE("OMP at sparsity one matches exhaustive least squares") {
    Rng rng(83);
    for (int t = 0; t < 200; ++t) {
        // unit-norm columns, the setting in which correlation and residual agree
        auto q = random_matrix(6, 8, rng);
        for (std::size_t c = 0; c < 8; ++c) {
            double nrm = 0.0;
            for (auto v : q.col(c)) nrm += std::norm(v);
            for (auto& v : q.col(c)) v /= std::sqrt(nrm);
        }
        const auto y = random_matrix(6, 1, rng);
        std::size_t best = 0;
        double best_res = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < 8; ++c) {
            const auto col = linalg::select_columns(q, std::vector<std::size_t>{c});
            const double res = linalg::frobenius_norm(y - linalg::matmul(col, linalg::lstsq(col, y)));
            if (res < best_res) {
                best_res = res;
                best = c;
            }
        }
        const auto r = cascade::omp(y, q, {1, {}});
        REQUIRE(r.support.size() == 1);
        CHECK(r.support[0] == best);
    }
}

TEST_CASE("noiseless OMP at default sizes with an optimized schedule") {
    Rng rng(84);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    const auto sched = ris::optimize_schedule(dict.f_ris, ris::random_schedule(32, 30, rng)).schedule;
    const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sched);
    const std::vector<bool> none(30, false);
    int exact = 0, zero_residual = 0, total = 0;
    for (int t = 0; t < 50; ++t) {
        const auto ch = channel::sample_channel(cfg, dict, rng);
        for (std::size_t k = 0; k < 4; ++k) {
            const auto y = linalg::matmul(q.q, linalg::vec(ch.d_cascade[k]));
            const auto r = cascade::omp(y, q.q, {cfg.cascade_sparsity(), {}});
            const auto u = cascade::estimate_user_cascade(y, none, q, dict, {cfg.cascade_sparsity(), {}});
            CHECK(u.d_hat == r.coeffs);
            ++total;
            const bool ok = metrics::nmse(ch.cascade[k], u.H_hat).db < -90.0;
            exact += ok ? 1 : 0;
            // a vanishing residual means a 4-sparse exact fit, which must reproduce H
            if (r.residual_norms.back() < 1e-10 * r.residual_norms.front()) {
                ++zero_residual;
                CHECK(ok);
            }
        }
    }
    MESSAGE("exact cascade recovery " << exact << "/" << total);
    CHECK(zero_residual == exact);
    CHECK(exact >= total * 85 / 100);
}

TEST_CASE("cascade estimate is scale equivariant") {
    Rng rng(85);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    const auto sched = ris::random_schedule(32, 30, rng);
    const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sched);
    const auto ch = channel::sample_channel(cfg, dict, rng);
    auto y = stacked_truth(ch, sched, 0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.05 * complex_gaussian(rng, 1.0);
    const std::vector<bool> none(30, false);
    const auto a = cascade::estimate_user_cascade(y, none, q, dict, {4, {}});
    const cplx s{-1.5, 2.0};
    const auto b = cascade::estimate_user_cascade(s * y, none, q, dict, {4, {}});
    CHECK(a.support == b.support);
    CHECK(linalg::relative_error(b.H_hat, s * a.H_hat) < 1e-10);
}

TEST_CASE("end-to-end noiseless estimate and erasure handling") {
    Rng rng(86);
    SystemConfig cfg;
    const auto dict = channel::build_dictionaries(cfg);
    auto sc = airlink::make_scenario(cfg, codebook::gen_codebook(28, 8, 4, rng), channel::sample_channel(cfg, dict, rng),
                                     ris::optimize_schedule(dict.f_ris, ris::random_schedule(32, 30, rng)).schedule, rng);
    const auto rx = airlink::synthesize(sc, kInf, rng);
    auto rec = recovery::recover_all_blocks(rx.y, sc.book, cfg);
    const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sc.schedule);
    const auto est = cascade::estimate_cascades(rec, q, dict, {4, {}});
    const std::vector<bool> none(30, false);
    for (std::size_t k = 0; k < 4; ++k) {
        // the blind pipeline sees the same measurements as OMP fed the true stack
        CHECK(linalg::relative_error(rec.stacked[k], stacked_truth(sc.channels, sc.schedule, k)) < 1e-9);
        const auto direct = cascade::estimate_user_cascade(stacked_truth(sc.channels, sc.schedule, k), none, q, dict,
                                                           {4, {}});
        CHECK(est.users[k].support == direct.support);
        CHECK(linalg::relative_error(est.users[k].H_hat, direct.H_hat) < 1e-8);
    }

    // one user loses every block
    for (std::size_t j = 0; j < 30; ++j) rec.erased[2][j] = true;
    const std::vector<bool> all(30, true);
    CHECK_THROWS_AS(cascade::estimate_user_cascade(rec.stacked[2], all, q, dict, {4, {}}), InsufficientMeasurementsError);
    const auto est2 = cascade::estimate_cascades(rec, q, dict, {4, {}});
    CHECK(est2.users[2].failed);
    CHECK(testutil::max_abs(est2.users[2].H_hat) == 0.0);
    CHECK_FALSE(est2.users[1].failed);
}

TEST_CASE("a single fixed RIS block cannot resolve the cascade") {
    Rng rng(87);
    SystemConfig cfg;
    cfg.n_blocks = 1;
    cfg.codeword_len = 28 * 30;
    const auto dict = channel::build_dictionaries(cfg);
    double mean = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        auto sc = airlink::make_scenario(cfg, codebook::gen_codebook(cfg.codeword_len, 8, 4, rng),
                                         channel::sample_channel(cfg, dict, rng), ris::random_schedule(32, 1, rng), rng);
        const auto rx = airlink::synthesize(sc, kInf, rng);
        const auto rec = recovery::recover_all_blocks(rx.y, sc.book, cfg);
        const auto q = cascade::build_sensing_matrix(dict.f_bs, dict.f_ris, sc.schedule);
        const auto est = cascade::estimate_cascades(rec, q, dict, {4, {}});
        for (std::size_t k = 0; k < 4; ++k) mean += metrics::nmse(sc.channels.cascade[k], est.users[k].H_hat).linear;
    }
    mean /= trials * 4.0;
    CHECK(metrics::to_db(mean) > -3.0);
}
