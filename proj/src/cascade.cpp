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

#include "blindris/cascade.hpp"

#include "blindris/errors.hpp"
#include "blindris/kernels.hpp"

#include <cmath>
#include <string>

namespace blindris::cascade {

SensingMatrix build_sensing_matrix(const ComplexMatrix& f_bs, const ComplexMatrix& f_ris,
                                   const ris::PhaseSchedule& schedule) {
    const ComplexMatrix a = ris::ris_operand(schedule.psi, f_ris); // J x G_R
    SensingMatrix s;
    s.n_bs = f_bs.rows();
    s.grid_bs = f_bs.cols();
    s.grid_ris = f_ris.cols();
    s.n_blocks = schedule.n_blocks();
    s.q = ComplexMatrix(s.n_blocks * s.n_bs, s.grid_bs * s.grid_ris);
    for (std::size_t b = 0; b < s.grid_bs; ++b) {
        for (std::size_t r = 0; r < s.grid_ris; ++r) {
            cplx* col = s.q.col(b * s.grid_ris + r).data();
            for (std::size_t j = 0; j < s.n_blocks; ++j) {
                const cplx ajr = a(j, r);
                for (std::size_t n = 0; n < s.n_bs; ++n) {
                    col[j * s.n_bs + n] = std::conj(f_bs(n, b)) * ajr;
                }
            }
        }
    }
    return s;
}

OmpResult omp(const ComplexMatrix& y, const ComplexMatrix& q, const OmpOptions& opts,
              const std::vector<bool>& row_mask) {
    if (y.rows() != q.rows() || y.cols() != 1) {
        throw DimensionError("omp: measurement vector must be rows(q) x 1");
    }
    if (!row_mask.empty() && row_mask.size() != q.rows()) {
        throw DimensionError("omp: row mask length must equal rows(q)");
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < q.rows(); ++i) {
        if (row_mask.empty() || !row_mask[i]) {
            keep.push_back(i);
        }
    }
    if (keep.size() < opts.sparsity) {
        throw InsufficientMeasurementsError("omp: " + std::to_string(keep.size()) + " unmasked rows for sparsity " +
                                            std::to_string(opts.sparsity));
    }
    const bool masked = keep.size() != q.rows();
    const ComplexMatrix q_used = masked ? linalg::select_rows(q, keep) : ComplexMatrix{};
    const ComplexMatrix y_used = masked ? linalg::select_rows(y, keep) : ComplexMatrix{};
    const ComplexMatrix& qm = masked ? q_used : q;
    const ComplexMatrix& ym = masked ? y_used : y;
    const std::size_t rows = qm.rows();

    OmpResult res;
    res.coeffs = ComplexMatrix(q.cols(), 1);
    ComplexMatrix residual = ym;
    const double y_norm = linalg::frobenius_norm(ym);
    res.residual_norms.push_back(y_norm);
    const double stop_at = opts.residual_threshold ? *opts.residual_threshold * y_norm : 1e-12 * y_norm;

    std::vector<bool> taken(q.cols(), false);
    std::vector<cplx> corr(q.cols());
    ComplexMatrix fit;
    for (std::size_t step = 0; step < opts.sparsity; ++step) {
        if (res.residual_norms.back() <= stop_at) {
            break;
        }
        std::size_t best = q.cols();
        double best_score = -1.0;
        kernels::adjoint_gemv(qm.data(), rows, qm.cols(), residual.data(), rows, corr.data());
        for (std::size_t c = 0; c < q.cols(); ++c) {
            if (taken[c]) {
                continue;
            }
            const double s = std::norm(corr[c]);
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        taken[best] = true;
        res.support.push_back(best);
        const ComplexMatrix sub = linalg::select_columns(qm, res.support);
        fit = linalg::lstsq(sub, ym);
        residual = ym - linalg::matmul(sub, fit);
        res.residual_norms.push_back(linalg::frobenius_norm(residual));
    }
    for (std::size_t i = 0; i < res.support.size(); ++i) {
        res.coeffs(res.support[i], 0) = fit(i, 0);
    }
    return res;
}

UserCascade estimate_user_cascade(const ComplexMatrix& stacked, const std::vector<bool>& erased_blocks,
                                  const SensingMatrix& sensing, const channel::SteeringDictionary& dict,
                                  const OmpOptions& opts) {
    if (erased_blocks.size() != sensing.n_blocks) {
        throw DimensionError("estimate_user_cascade: erasure mask must cover every block");
    }
    std::vector<bool> row_mask(sensing.q.rows(), false);
    for (std::size_t j = 0; j < sensing.n_blocks; ++j) {
        for (std::size_t n = 0; n < sensing.n_bs; ++n) {
            row_mask[j * sensing.n_bs + n] = erased_blocks[j];
        }
    }
    OmpResult r = omp(stacked, sensing.q, opts, row_mask);
    UserCascade u;
    u.D_hat = linalg::unvec(r.coeffs, sensing.grid_ris, sensing.grid_bs);
    u.H_hat = linalg::matmul(linalg::matmul(dict.f_ris, u.D_hat), linalg::adjoint(dict.f_bs));
    u.d_hat = std::move(r.coeffs);
    u.support = std::move(r.support);
    return u;
}

namespace {

UserCascade failed_user(const char* why, const SensingMatrix& sensing, const channel::SteeringDictionary& dict) {
    UserCascade u;
    u.failed = true;
    u.failure = why;
    u.d_hat = ComplexMatrix(sensing.q.cols(), 1);
    u.D_hat = ComplexMatrix(sensing.grid_ris, sensing.grid_bs);
    u.H_hat = ComplexMatrix(dict.f_ris.rows(), dict.f_bs.rows());
    return u;
}

} // namespace

CascadeEstimate estimate_cascades(const recovery::RecoveryOutput& rec, const SensingMatrix& sensing,
                                  const channel::SteeringDictionary& dict, const OmpOptions& opts) {
    CascadeEstimate est;
    est.users.reserve(rec.stacked.size());
    for (std::size_t k = 0; k < rec.stacked.size(); ++k) {
        try {
            est.users.push_back(estimate_user_cascade(rec.stacked[k], rec.erased[k], sensing, dict, opts));
        } catch (const InsufficientMeasurementsError& e) {
            est.users.push_back(failed_user(e.what(), sensing, dict));
        } catch (const NumericalRankError& e) {
            est.users.push_back(failed_user(e.what(), sensing, dict));
        }
    }
    return est;
}

} // namespace blindris::cascade
