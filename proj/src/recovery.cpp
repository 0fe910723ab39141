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

#include "blindris/recovery.hpp"

#include "blindris/errors.hpp"
#include "blindris/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace blindris::recovery {

SompResult somp(const ComplexMatrix& y, const ComplexMatrix& codebook, std::size_t k, std::size_t n_iters) {
    const std::size_t m = codebook.rows();
    const std::size_t n = codebook.cols();
    if (y.rows() != m) {
        throw DimensionError("somp: block has " + std::to_string(y.rows()) + " rows, codebook has " +
                             std::to_string(m));
    }
    if (n_iters < k || n_iters > std::min(m, n)) {
        throw ConfigError("somp: need K <= n_iters <= min(M, N), got n_iters = " + std::to_string(n_iters));
    }

    std::vector<double> col_norm_sq(n);
    for (std::size_t c = 0; c < n; ++c) {
        col_norm_sq[c] = kernels::norm2sq(codebook.col(c).data(), m);
    }

    SompResult res;
    std::vector<bool> taken(n, false);
    ComplexMatrix residual = y;
    ComplexMatrix coeffs;
    res.residual_norms.push_back(linalg::frobenius_norm(residual));

    for (std::size_t it = 0; it < n_iters; ++it) {
        std::size_t best = n;
        double best_score = -1.0;
        const ComplexMatrix corr = linalg::adjoint_matmul(codebook, residual);
        for (std::size_t c = 0; c < n; ++c) {
            if (taken[c] || col_norm_sq[c] == 0.0) {
                continue;
            }
            double s = 0.0;
            for (std::size_t a = 0; a < residual.cols(); ++a) {
                s += std::norm(corr(c, a));
            }
            s /= col_norm_sq[c];
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        if (best == n) {
            throw NumericalRankError("somp: no admissible column left");
        }
        taken[best] = true;
        res.selected.push_back(best);

        const ComplexMatrix sub = linalg::select_columns(codebook, res.selected);
        coeffs = linalg::lstsq(sub, y);
        residual = y - linalg::matmul(sub, coeffs);
        res.residual_norms.push_back(linalg::frobenius_norm(residual));
    }

    // Keep the k strongest rows; stable so ties keep selection order.
    std::vector<std::size_t> order(res.selected.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> row_norm(order.size(), 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t a = 0; a < coeffs.cols(); ++a) {
            row_norm[i] += std::norm(coeffs(i, a));
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) { return row_norm[lhs] > row_norm[rhs]; });
    order.resize(k);
    std::sort(order.begin(), order.end());

    res.support.reserve(k);
    res.rows = ComplexMatrix(k, y.cols());
    for (std::size_t i = 0; i < k; ++i) {
        res.support.push_back(res.selected[order[i]]);
        for (std::size_t a = 0; a < y.cols(); ++a) {
            res.rows(i, a) = coeffs(order[i], a);
        }
    }
    return res;
}

std::vector<UserResolution> resolve_permutation(std::span<const std::size_t> raw_support,
                                                const ComplexMatrix& raw_rows, const codebook::Codebook& book) {
    if (raw_rows.rows() != raw_support.size()) {
        throw DimensionError("resolve_permutation: one row per raw index required");
    }
    std::vector<UserResolution> users(book.n_users);
    std::vector<std::size_t> claims(book.n_users, 0);
    std::vector<std::size_t> claimant(book.n_users, 0);
    for (std::size_t i = 0; i < raw_support.size(); ++i) {
        const long owner = codebook::owner_of(book, raw_support[i]);
        if (owner < 0) {
            continue;
        }
        ++claims[static_cast<std::size_t>(owner)];
        claimant[static_cast<std::size_t>(owner)] = i;
    }
    for (std::size_t u = 0; u < book.n_users; ++u) {
        if (claims[u] != 1) {
            continue;
        }
        const std::size_t i = claimant[u];
        users[u].erased = false;
        users[u].index = raw_support[i];
        users[u].row = ComplexMatrix(1, raw_rows.cols());
        for (std::size_t a = 0; a < raw_rows.cols(); ++a) {
            users[u].row(0, a) = raw_rows(i, a);
        }
    }
    return users;
}

RecoveryOutput recover_all_blocks(std::span<const ComplexMatrix> y, const codebook::Codebook& book,
                                  const SystemConfig& cfg, std::size_t n_iters) {
    const std::size_t k = cfg.n_users;
    const std::size_t n_bs = cfg.n_bs_antennas;
    const std::size_t iters = n_iters == 0 ? k : n_iters;
    const std::size_t j_blocks = y.size();

    RecoveryOutput out;
    out.stacked.assign(k, ComplexMatrix(j_blocks * n_bs, 1));
    out.erased.assign(k, std::vector<bool>(j_blocks, true));
    out.blocks.reserve(j_blocks);

    for (std::size_t j = 0; j < j_blocks; ++j) {
        BlockRecovery br;
        br.block = j;
        try {
            SompResult s = somp(y[j], book.matrix, k, iters);
            br.users = resolve_permutation(s.support, s.rows, book);
            br.raw_support = std::move(s.support);
            br.raw_rows = std::move(s.rows);
        } catch (const NumericalRankError&) {
            br.failed = true;
            br.users.assign(k, UserResolution{});
        }
        for (std::size_t u = 0; u < k; ++u) {
            if (br.users[u].erased) {
                continue;
            }
            out.erased[u][j] = false;
            for (std::size_t a = 0; a < n_bs; ++a) {
                out.stacked[u](j * n_bs + a, 0) = br.users[u].row(0, a);
            }
        }
        out.blocks.push_back(std::move(br));
    }
    return out;
}

} // namespace blindris::recovery
