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
#include "blindris/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blindris::airlink {

void TransmissionScenario::validate() const {
    const std::size_t k = cfg.n_users;
    const std::size_t j = cfg.n_blocks;
    if (messages.size() != k * j) {
        throw ConfigError("scenario: expected " + std::to_string(k * j) + " messages, got " +
                          std::to_string(messages.size()));
    }
    for (std::size_t b = 0; b < j; ++b) {
        for (std::size_t u = 0; u < k; ++u) {
            const auto& m = message(u, b);
            if (m.user != u || m.block != b) {
                throw ConfigError("scenario: message coverage is not one per (user, block)");
            }
        }
    }
    if (schedule.n_blocks() != j || schedule.n_ris() != cfg.n_ris_elements) {
        throw ConfigError("scenario: schedule shape does not match config");
    }
    if (channels.n_users() != k || book.n_users != k || book.codeword_len() != cfg.codeword_len) {
        throw ConfigError("scenario: channel/codebook sizes do not match config");
    }
}

TransmissionScenario make_scenario(const SystemConfig& cfg, codebook::Codebook book,
                                   channel::ChannelRealization channels, ris::PhaseSchedule schedule, Rng& rng) {
    TransmissionScenario sc{cfg, std::move(book), std::move(channels), std::move(schedule), {}};
    std::bernoulli_distribution coin(0.5);
    codebook::Bits bits(sc.book.data_bits());
    sc.messages.reserve(cfg.n_users * cfg.n_blocks);
    for (std::size_t b = 0; b < cfg.n_blocks; ++b) {
        for (std::size_t u = 0; u < cfg.n_users; ++u) {
            for (auto& bit : bits) {
                bit = coin(rng) ? 1 : 0;
            }
            sc.messages.push_back(codebook::encode(sc.book, u, bits, b).message);
        }
    }
    sc.validate();
    return sc;
}

ComplexMatrix equivalent_channel(std::span<const cplx> psi_col, const channel::ChannelRealization& ch) {
    const std::size_t k_users = ch.n_users();
    if (k_users == 0) {
        return {};
    }
    const std::size_t n_ris = ch.cascade.front().rows();
    const std::size_t n_bs = ch.cascade.front().cols();
    if (psi_col.size() != n_ris) {
        throw DimensionError("equivalent_channel: schedule column length does not match N_R");
    }
    // psi^T H_k(:, c) = sum_n psi[n] H_k(n, c) = dotc(conj(psi), H_k(:, c))
    std::vector<cplx> conj_psi(psi_col.begin(), psi_col.end());
    for (auto& v : conj_psi) {
        v = std::conj(v);
    }
    ComplexMatrix g(k_users, n_bs);
    for (std::size_t k = 0; k < k_users; ++k) {
        for (std::size_t c = 0; c < n_bs; ++c) {
            g(k, c) = kernels::dotc(conj_psi.data(), ch.cascade[k].col(c).data(), n_ris);
        }
    }
    return g;
}

double noise_variance_for_snr(std::span<const ComplexMatrix> noiseless, double snr_db) {
    double power = 0.0;
    std::size_t count = 0;
    for (const auto& y : noiseless) {
        power += linalg::frobenius_norm_sq(y);
        count += y.size();
    }
    if (count == 0 || power == 0.0) {
        throw DegenerateInputError("noise_variance_for_snr: noiseless signal is identically zero");
    }
    if (std::isinf(snr_db) && snr_db > 0) {
        return 0.0;
    }
    return (power / static_cast<double>(count)) / std::pow(10.0, snr_db / 10.0);
}

ComplexMatrix row_sparse_lambda(const TransmissionScenario& sc, std::size_t block, const ComplexMatrix& g) {
    ComplexMatrix lambda(sc.book.n_codewords(), g.cols());
    for (std::size_t k = 0; k < sc.cfg.n_users; ++k) {
        const std::size_t n = sc.message(k, block).codeword_index;
        for (std::size_t c = 0; c < g.cols(); ++c) {
            lambda(n, c) += g(k, c);
        }
    }
    return lambda;
}

ReceivedBlocks synthesize(const TransmissionScenario& sc, double snr_db, Rng& rng) {
    sc.validate();
    const std::size_t m = sc.cfg.codeword_len;
    const std::size_t n_bs = sc.cfg.n_bs_antennas;
    ReceivedBlocks out;
    out.y.reserve(sc.cfg.n_blocks);
    for (std::size_t j = 0; j < sc.cfg.n_blocks; ++j) {
        ComplexMatrix g = equivalent_channel(sc.schedule.psi.col(j), sc.channels);

        // Superposition of user signals.
        ComplexMatrix direct(m, n_bs);
        for (std::size_t k = 0; k < sc.cfg.n_users; ++k) {
            const auto x = sc.book.matrix.col(sc.message(k, j).codeword_index);
            for (std::size_t c = 0; c < n_bs; ++c) {
                kernels::axpy(g(k, c), x.data(), direct.col(c).data(), m);
            }
        }
        // Row-sparse codebook form.
        const ComplexMatrix via_lambda = linalg::matmul(sc.book.matrix, row_sparse_lambda(sc, j, g));
        const double scale = std::max(linalg::frobenius_norm(direct), 1e-300);
        if (linalg::frobenius_norm(direct - via_lambda) > 1e-12 * scale) {
            throw ModelInconsistencyError("synthesize: superposition and C*Lambda disagree in block " +
                                          std::to_string(j));
        }
        out.noiseless.push_back(std::move(direct));
        out.equivalent.push_back(std::move(g));
    }

    out.noise_var = noise_variance_for_snr(out.noiseless, snr_db);
    out.y = out.noiseless;
    if (out.noise_var > 0.0) {
        for (auto& y : out.y) {
            for (std::size_t i = 0; i < y.size(); ++i) {
                y[i] += complex_gaussian(rng, out.noise_var);
            }
        }
    }
    return out;
}

} // namespace blindris::airlink
